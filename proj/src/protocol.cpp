#include "qbc/protocol.hpp"

#include <cmath>
#include <sstream>

#include "qbc/kernels.hpp"

namespace qbc {

KrausFamily::KrausFamily(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> ops)
    : dim_in_(dim_in), dim_out_(dim_out), ops_(std::move(ops)) {
    if (dim_in_ == 0 || dim_out_ == 0) throw DimensionError("Kraus family dimensions must be positive");
    if (ops_.empty()) throw DimensionError("Kraus family needs at least one operator");
    for (std::size_t j = 0; j < ops_.size(); ++j) {
        if (ops_[j].rows() != dim_out_ || ops_[j].cols() != dim_in_) {
            throw DimensionError("Kraus operator " + std::to_string(j) + " is " + std::to_string(ops_[j].rows()) +
                                 "x" + std::to_string(ops_[j].cols()) + ", expected " + std::to_string(dim_out_) +
                                 "x" + std::to_string(dim_in_));
        }
        if (!ops_[j].all_finite()) throw NumericalError("Kraus operator " + std::to_string(j) + " has non-finite entries");
    }
}

KrausFamily KrausFamily::padded_to(std::size_t m) const {
    auto ops = ops_;
    while (ops.size() < m) ops.emplace_back(dim_out_, dim_in_);
    return {dim_in_, dim_out_, std::move(ops)};
}

ProtocolSpec ProtocolSpec::swapped() const { return {label, bit1, bit0, secret}; }

double completeness_residual(const KrausFamily& fam) {
    ComplexMatrix sum(fam.dim_in(), fam.dim_in());
    for (const auto& e : fam.ops()) sum += adjoint_times(e, e);
    return operator_norm(sum - ComplexMatrix::identity(fam.dim_in()));
}

ValidationReport validate(const ProtocolSpec& spec, double tol) {
    ValidationReport rep;
    rep.tolerance = tol;
    rep.dims_match = spec.bit0.dim_in() == spec.bit1.dim_in() && spec.bit0.dim_out() == spec.bit1.dim_out();
    if (!rep.dims_match) rep.messages.emplace_back("bit0 and bit1 act between different spaces");
    rep.cardinality_match = spec.bit0.cardinality() == spec.bit1.cardinality();
    if (!rep.cardinality_match) rep.messages.emplace_back("bit0 and bit1 have different Kraus cardinality");

    rep.completeness_residual_bit0 = completeness_residual(spec.bit0);
    rep.completeness_residual_bit1 = completeness_residual(spec.bit1);
    auto check = [&](double r, const char* which) {
        if (!(r <= tol)) {
            std::ostringstream os;
            os << which << ": completeness residual " << r << " exceeds " << tol << " (not trace preserving)";
            rep.messages.push_back(os.str());
            return false;
        }
        return true;
    };
    const bool ok0 = check(rep.completeness_residual_bit0, "bit0");
    const bool ok1 = check(rep.completeness_residual_bit1, "bit1");

    if (spec.secret) {
        double psum = 0.0;
        std::size_t count = 0;
        bool probs_ok = true;
        for (const auto& g : spec.secret->groups) {
            psum += g.probability;
            count += g.outcome_count;
            if (!(g.probability >= 0.0) || g.outcome_count == 0) probs_ok = false;
        }
        const std::size_t m = std::max(spec.bit0.cardinality(), spec.bit1.cardinality());
        rep.secret_consistent = probs_ok && std::abs(psum - 1.0) <= 1e-12 && count == m && !spec.secret->groups.empty();
        if (!rep.secret_consistent)
            rep.messages.emplace_back("secret structure: probabilities must sum to 1 and outcome counts to the cardinality");
    }
    rep.accepted = rep.dims_match && rep.cardinality_match && ok0 && ok1 && rep.secret_consistent;
    return rep;
}

ProtocolSpec make_protocol(std::string label, KrausFamily bit0, KrausFamily bit1,
                           std::optional<SecretStructure> secret, double tol) {
    const std::size_t m = std::max(bit0.cardinality(), bit1.cardinality());
    ProtocolSpec spec{std::move(label), bit0.padded_to(m), bit1.padded_to(m), std::move(secret)};
    auto rep = validate(spec, tol);
    if (!rep.accepted) {
        std::string what = "protocol rejected";
        for (const auto& msg : rep.messages) what += "; " + msg;
        throw ProtocolError(what, std::move(rep));
    }
    return spec;
}

ComplexMatrix apply_channel(const KrausFamily& fam, const ComplexMatrix& rho) {
    if (rho.rows() != fam.dim_in() || rho.cols() != fam.dim_in())
        throw DimensionError("apply_channel: state dimension does not match the family input");
    ComplexMatrix out(fam.dim_out(), fam.dim_out());
    for (const auto& e : fam.ops()) out += times_adjoint(e * rho, e);
    return out;
}

ComplexMatrix apply_extended_channel(const KrausFamily& fam, const ComplexMatrix& rho, std::size_t ref_dim) {
    if (ref_dim == 0 || rho.rows() != fam.dim_in() * ref_dim || !rho.is_square())
        throw DimensionError("apply_extended_channel: state is not on H (x) R");
    const auto id = ComplexMatrix::identity(ref_dim);
    const std::size_t n = fam.dim_out() * ref_dim;
    ComplexMatrix out(n, n);
    for (const auto& e : fam.ops()) {
        const auto ext = tensor_product(e, id);
        out += times_adjoint(ext * rho, ext);
    }
    return out;
}

ComplexMatrix choi(const KrausFamily& fam) {
    const std::size_t din = fam.dim_in(), dout = fam.dim_out();
    const std::size_t n = din * dout;
    ComplexMatrix out(n, n);
    std::vector<cplx> v(n);
    for (const auto& e : fam.ops()) {
        // v = sum_k |k> (x) E|k>
        for (std::size_t k = 0; k < din; ++k)
            for (std::size_t o = 0; o < dout; ++o) v[k * dout + o] = e(o, k);
        for (std::size_t r = 0; r < n; ++r) {
            if (v[r] == cplx{}) continue;
            // row r += v_r * conj(v)
            for (std::size_t c = 0; c < n; ++c) out(r, c) += v[r] * std::conj(v[c]);
        }
    }
    return out;
}

double choi_distance(const KrausFamily& a, const KrausFamily& b) {
    if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) throw DimensionError("choi_distance: dimension mismatch");
    return (choi(a) - choi(b)).frobenius_norm();
}

CheatUnitary::CheatUnitary(ComplexMatrix v, double tol) : v_(std::move(v)) {
    if (!v_.is_square()) throw DimensionError("cheat unitary must be square");
    const double res = unitarity_residual(v_);
    if (!(res <= tol)) {
        std::ostringstream os;
        os << "cheat matrix is not unitary (residual " << res << ")";
        throw NumericalError(os.str());
    }
}

KrausFamily apply_cheat_unitary(const KrausFamily& fam, const CheatUnitary& v) {
    if (v.m() != fam.cardinality()) throw DimensionError("cheat unitary size differs from Kraus cardinality");
    const auto& kern = kernels::active();
    const std::size_t m = fam.cardinality();
    std::vector<ComplexMatrix> ops;
    ops.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix acc(fam.dim_out(), fam.dim_in());
        for (std::size_t l = 0; l < m; ++l) {
            const cplx c = v.matrix()(j, l);
            if (c == cplx{}) continue;
            kern.axpy(c, fam[l].entries().data(), acc.entries().data(), acc.size());
        }
        ops.push_back(std::move(acc));
    }
    return {fam.dim_in(), fam.dim_out(), std::move(ops)};
}

CheatUnitary procrustes_alignment(const ProtocolSpec& spec) {
    const std::size_t m = spec.cardinality();
    const auto& kern = kernels::active();
    // t_{JL} = Tr(E0_L^dagger E1_J) = <vec E0_L, vec E1_J>
    ComplexMatrix t(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l)
            t(j, l) = kern.dotc(spec.bit0[l].entries().data(), spec.bit1[j].entries().data(), spec.bit0[l].size());
    return CheatUnitary(polar_unitary(t));
}

}  // namespace qbc
