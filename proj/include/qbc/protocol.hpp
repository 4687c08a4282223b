#pragma once

// Single-step commitment protocols: one Kraus family per committed bit value.

#include <optional>
#include <string>
#include <vector>

#include "qbc/linalg.hpp"
#include "qbc/matrix.hpp"

namespace qbc {

inline constexpr double kCompletenessTol = 1e-9;

// Ordered Kraus operators E_J : C^dim_in -> C^dim_out. Construction checks
// shapes only; completeness is checked by validate().
class KrausFamily {
  public:
    KrausFamily(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> ops);

    std::size_t dim_in() const noexcept { return dim_in_; }
    std::size_t dim_out() const noexcept { return dim_out_; }
    std::size_t cardinality() const noexcept { return ops_.size(); }
    const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
    const ComplexMatrix& operator[](std::size_t j) const noexcept { return ops_[j]; }

    // Appends zero operators up to `m` terms; the channel is unchanged.
    KrausFamily padded_to(std::size_t m) const;

    friend bool operator==(const KrausFamily&, const KrausFamily&) = default;

  private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    std::vector<ComplexMatrix> ops_;
};

// Grouping of the flat index J into (j, i): group j has probability p_j and
// outcome_count Kraus terms.
struct SecretGroup {
    double probability = 1.0;
    std::size_t outcome_count = 1;
    friend bool operator==(const SecretGroup&, const SecretGroup&) = default;
};

struct SecretStructure {
    std::vector<SecretGroup> groups;
    friend bool operator==(const SecretStructure&, const SecretStructure&) = default;
};

struct ProtocolSpec {
    std::string label;
    KrausFamily bit0;
    KrausFamily bit1;
    std::optional<SecretStructure> secret;

    std::size_t dim_in() const noexcept { return bit0.dim_in(); }
    std::size_t dim_out() const noexcept { return bit0.dim_out(); }
    std::size_t cardinality() const noexcept { return bit0.cardinality(); }

    // bit0 and bit1 exchanged: the "committed 1, pretend 0" view.
    ProtocolSpec swapped() const;

    friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

struct ValidationReport {
    double completeness_residual_bit0 = 0.0;
    double completeness_residual_bit1 = 0.0;
    bool dims_match = true;
    bool cardinality_match = true;
    bool secret_consistent = true;
    double tolerance = kCompletenessTol;
    bool accepted = false;
    std::vector<std::string> messages;
};

class ProtocolError : public std::invalid_argument {
  public:
    ProtocolError(const std::string& what, ValidationReport report)
        : std::invalid_argument(what), report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }

  private:
    ValidationReport report_;
};

// ||sum_J E_J^dagger E_J - I|| (operator norm).
double completeness_residual(const KrausFamily& fam);

ValidationReport validate(const ProtocolSpec& spec, double tol = kCompletenessTol);

// Pads the shorter family with zero operators, validates, and throws
// ProtocolError with the report attached on rejection.
ProtocolSpec make_protocol(std::string label, KrausFamily bit0, KrausFamily bit1,
                           std::optional<SecretStructure> secret = std::nullopt, double tol = kCompletenessTol);

ComplexMatrix apply_channel(const KrausFamily& fam, const ComplexMatrix& rho);

// (M (x) id_R)(rho) for rho on H (x) R.
ComplexMatrix apply_extended_channel(const KrausFamily& fam, const ComplexMatrix& rho, std::size_t ref_dim);

// Unnormalized Choi operator sum_{kl} |k><l| (x) M(|k><l|), input slot first.
ComplexMatrix choi(const KrausFamily& fam);

// Frobenius distance between Choi operators.
double choi_distance(const KrausFamily& a, const KrausFamily& b);

// A unitary acting on the Kraus index space (the secret space of the committer).
class CheatUnitary {
  public:
    static constexpr double kTolerance = 1e-8;

    CheatUnitary() : v_(ComplexMatrix::identity(1)) {}
    explicit CheatUnitary(ComplexMatrix v, double tol = kTolerance);
    static CheatUnitary identity(std::size_t m) { return CheatUnitary(ComplexMatrix::identity(m)); }

    std::size_t m() const noexcept { return v_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return v_; }

  private:
    ComplexMatrix v_;
};

// E_J(V) = sum_L E_L V_{JL}.
KrausFamily apply_cheat_unitary(const KrausFamily& fam, const CheatUnitary& v);

// V maximizing Re sum_J Tr(E_J^(0)(V)^dagger E_J^(1)), i.e. the Frobenius-closest
// reindexing of bit0 onto bit1.
CheatUnitary procrustes_alignment(const ProtocolSpec& spec);

struct Dilation {
    ComplexMatrix unitary;      // on H (x) A, maps onto K (x) F
    StateVector ancilla_state;  // |omega> = |0> on A
    std::size_t dim_in = 1;
    std::size_t dim_out = 1;
    std::size_t ancilla_dim = 1;  // A
    std::size_t env_dim = 1;      // F, traced at the end
    double isometry_residual = 0.0;
    double unitarity_residual = 0.0;
};

Dilation dilate(const KrausFamily& fam);

// Tr_F[U (rho (x) |omega><omega|) U^dagger].
ComplexMatrix apply_dilation(const Dilation& dil, const ComplexMatrix& rho);

// Choi operator of the channel realized by the dilation.
ComplexMatrix dilation_choi(const Dilation& dil);

}  // namespace qbc
