#include <numeric>

#include "qbc/protocol.hpp"

namespace qbc {

Dilation dilate(const KrausFamily& fam) {
    const std::size_t din = fam.dim_in(), dout = fam.dim_out(), m = fam.cardinality();
    // K (x) F ~ H (x) A requires din * dim_A == dout * dim_F with dim_F >= m.
    const std::size_t l = std::lcm(din, dout);
    const std::size_t total = (dout * m + l - 1) / l * l;
    const std::size_t env = total / dout;
    const std::size_t anc = total / din;

    // Isometry columns W|h> = sum_J E_J|h> (x) |J>.
    ComplexMatrix iso(total, din);
    for (std::size_t h = 0; h < din; ++h)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t o = 0; o < dout; ++o) iso(o * env + j, h) = fam[j](o, h);

    Dilation dil;
    dil.dim_in = din;
    dil.dim_out = dout;
    dil.ancilla_dim = anc;
    dil.env_dim = env;
    dil.ancilla_state = StateVector::basis(anc, 0);
    dil.isometry_residual = operator_norm(adjoint_times(iso, iso) - ComplexMatrix::identity(din));

    ComplexMatrix seed(total, total);
    for (std::size_t h = 0; h < din; ++h)
        for (std::size_t r = 0; r < total; ++r) seed(r, h) = iso(r, h);
    const ComplexMatrix completed = complete_to_unitary(seed, din);

    // Column |h>|0> carries W|h>; the completion fills the remaining columns in order.
    ComplexMatrix u(total, total);
    std::size_t next = din;
    for (std::size_t c = 0; c < total; ++c) {
        const std::size_t src = (c % anc == 0) ? c / anc : next++;
        for (std::size_t r = 0; r < total; ++r) u(r, c) = completed(r, src);
    }
    dil.unitarity_residual = unitarity_residual(u);
    dil.unitary = std::move(u);
    return dil;
}

ComplexMatrix apply_dilation(const Dilation& dil, const ComplexMatrix& rho) {
    if (rho.rows() != dil.dim_in || !rho.is_square()) throw DimensionError("apply_dilation: state dimension mismatch");
    const ComplexMatrix joint = tensor_product(rho, dil.ancilla_state.projector());
    const ComplexMatrix evolved = times_adjoint(dil.unitary * joint, dil.unitary);
    const std::size_t dims[] = {dil.dim_out, dil.env_dim};
    const std::size_t traced[] = {1};
    return partial_trace(evolved, dims, traced);
}

ComplexMatrix dilation_choi(const Dilation& dil) {
    const std::size_t din = dil.dim_in, dout = dil.dim_out;
    ComplexMatrix out(din * dout, din * dout);
    for (std::size_t k = 0; k < din; ++k)
        for (std::size_t l = 0; l < din; ++l) {
            ComplexMatrix unit(din, din);
            unit(k, l) = 1.0;
            const ComplexMatrix img = apply_dilation(dil, unit);
            for (std::size_t a = 0; a < dout; ++a)
                for (std::size_t b = 0; b < dout; ++b) out(k * dout + a, l * dout + b) = img(a, b);
        }
    return out;
}

}  // namespace qbc
