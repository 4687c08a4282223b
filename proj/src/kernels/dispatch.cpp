#include <atomic>
#include <cstdlib>
#include <string>

#include "qbc/kernels.hpp"

namespace qbc::kernels {

#if QBC_WITH_AVX2
const KernelTable* avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if QBC_WITH_AVX2
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_table_unchecked();
#endif
    return nullptr;
}

namespace {

const KernelTable* pick_default() {
    if (const char* env = std::getenv("QBC_KERNELS"); env != nullptr && std::string(env) == "scalar") {
        return &scalar_table();
    }
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> current{pick_default()};
    return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    if (name == "scalar") {
        slot().store(&scalar_table(), std::memory_order_release);
        return true;
    }
    if (name == "avx2") {
        if (const KernelTable* t = avx2_table()) {
            slot().store(t, std::memory_order_release);
            return true;
        }
    }
    return false;
}

std::vector<std::string_view> available() {
    std::vector<std::string_view> names{"scalar"};
    if (avx2_table() != nullptr) names.emplace_back("avx2");
    return names;
}

}  // namespace qbc::kernels
