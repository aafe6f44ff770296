#ifndef UGRAV_DOMAIN_HPP
#define UGRAV_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"

namespace ugrav {

/// Canonically ordered set of location labels. Labels are unique, non-empty,
/// and sorted ascending; all matrices and vectors in the library align to
/// this order.
class LocationIndex {
  public:
    LocationIndex() = default;

    explicit LocationIndex(std::vector<std::string> labels) : labels_(std::move(labels)) {
        std::sort(labels_.begin(), labels_.end());
        if (labels_.size() < 2) throw ValidationError("LocationIndex needs at least 2 locations");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) throw ValidationError("empty location label");
            if (i > 0 && labels_[i] == labels_[i - 1])
                throw ValidationError("duplicate location label: " + labels_[i]);
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Index of a label, or -1 if absent.
    std::ptrdiff_t find(const std::string& label) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label) return -1;
        return it - labels_.begin();
    }

    friend bool operator==(const LocationIndex&, const LocationIndex&) = default;

  private:
    std::vector<std::string> labels_;
};

/// N x N baseline bilateral flows, exporter rows / importer columns.
struct TradeMatrix {
    Matrix X;

    std::size_t size() const { return X.rows(); }
};

/// Row/column sums of a trade matrix and derived deficit measures.
struct Marginals {
    Vec Y;       ///< income, row sums
    Vec E;       ///< expenditure, column sums
    double Ybar = 0.0;
    Vec delta;   ///< D_i / Y_i
    Vec D;       ///< E_i - Y_i
};

/// Multiplicative trade-cost shock, entries tau_hat^(-theta).
struct ShockMatrix {
    Matrix B;
};

struct Elasticities {
    double theta = 0.0;  ///< trade elasticity, > 0
    double psi = 0.0;    ///< supply elasticity, >= 0
};

/// Relative changes in deficit parameters and supply shifters.
/// Either c_hat is given explicitly, or it is the elementwise product of
/// a_hat and l_hat. Welfare is defined only in the latter case.
struct ShiftVectors {
    Vec xi_hat;
    Vec c_hat;
    Vec a_hat;
    Vec l_hat;
    bool c_is_explicit = false;

    static ShiftVectors unit(std::size_t n) {
        ShiftVectors sv;
        sv.xi_hat.assign(n, 1.0);
        sv.c_hat.assign(n, 1.0);
        sv.a_hat.assign(n, 1.0);
        sv.l_hat.assign(n, 1.0);
        return sv;
    }

    static ShiftVectors from_a_l(Vec a_hat, Vec l_hat, Vec xi_hat) {
        ShiftVectors sv;
        sv.a_hat = std::move(a_hat);
        sv.l_hat = std::move(l_hat);
        sv.xi_hat = std::move(xi_hat);
        sv.c_hat.resize(sv.a_hat.size());
        for (std::size_t i = 0; i < sv.a_hat.size(); ++i) sv.c_hat[i] = sv.a_hat[i] * sv.l_hat[i];
        return sv;
    }

    static ShiftVectors from_c(Vec c_hat, Vec xi_hat) {
        ShiftVectors sv;
        sv.c_hat = std::move(c_hat);
        sv.xi_hat = std::move(xi_hat);
        sv.a_hat.assign(sv.c_hat.size(), 1.0);
        sv.l_hat.assign(sv.c_hat.size(), 1.0);
        sv.c_is_explicit = true;
        return sv;
    }

    bool xi_is_unit() const {
        for (double x : xi_hat)
            if (x != 1.0) return false;
        return true;
    }
};

enum class DeficitMode {
    Default,         ///< nominal deficits held constant (endogenous xi_hat)
    Universal,       ///< xi_hat fixed at the user-supplied value
    Multiplicative,  ///< universal with xi_hat = 1, then Xi_hat rescaled to 1
};

inline const char* to_string(DeficitMode m) {
    switch (m) {
        case DeficitMode::Default: return "default";
        case DeficitMode::Universal: return "universal";
        case DeficitMode::Multiplicative: return "multiplicative";
    }
    return "?";
}

struct SolverConfig {
    DeficitMode mode = DeficitMode::Default;
    double tol = 1e-12;
    long max_iter = 1000000;
    double damping = 1.0;  ///< p_hat <- p_hat^(1-damping) * p_next^damping
};

/// Converged price changes.
struct Solution {
    Vec p_hat;
    Vec P_hat;
    double Xi_hat = 1.0;         ///< reported value (rescaled to 1 in Multiplicative mode)
    double Xi_hat_system = 1.0;  ///< value satisfying the equation system
    Vec xi_hat_effective;        ///< xi_hat actually used (endogenous in Default mode)
    long n_iter = 0;
    double crit = 0.0;
    bool converged = false;
};

/// All derived counterfactual changes and levels.
struct StaticsBundle {
    Vec Y_hat, E_hat, Q_hat, W_hat;
    Vec rw_hat;  ///< real wage change w_hat / P_hat
    Vec nw_hat;  ///< nominal wage change w_hat
    Vec rp;      ///< real output price change p_hat / P_hat
    Matrix X_hat, X_prime;
    Vec E_prime, Y_prime;
    bool welfare_defined = true;
};

inline void check_elasticities(const Elasticities& el) {
    if (!(el.theta > 0.0) || !std::isfinite(el.theta))
        throw BadElasticity("theta must be strictly positive");
    if (!(el.psi >= 0.0) || !std::isfinite(el.psi))
        throw BadElasticity("psi must be nonnegative");
}

/// Validate a full input bundle against the type invariants. Throws on the
/// first violation, returns normally otherwise.
inline void validate_inputs(const TradeMatrix& X, const ShockMatrix& B, const Elasticities& el,
                            const ShiftVectors& sv, const SolverConfig& cfg) {
    const std::size_t n = X.size();
    if (n < 2) throw ValidationError("need at least 2 locations");
    if (X.X.cols() != n) throw DimensionMismatch("trade matrix is not square");
    if (B.B.rows() != n || B.B.cols() != n)
        throw DimensionMismatch("shock matrix shape does not match trade matrix");
    if (sv.xi_hat.size() != n || sv.c_hat.size() != n || sv.a_hat.size() != n ||
        sv.l_hat.size() != n)
        throw DimensionMismatch("shift vector length does not match trade matrix");

    for (double x : X.X.data()) {
        if (!std::isfinite(x) || x < 0.0) throw ValidationError("trade flow negative or non-finite");
    }
    Vec Y = row_sums(X.X), E = col_sums(X.X);
    for (std::size_t i = 0; i < n; ++i) {
        if (Y[i] <= 0.0) throw ZeroMarginal("row sum (income) is zero at index " + std::to_string(i));
        if (E[i] <= 0.0)
            throw ZeroMarginal("column sum (expenditure) is zero at index " + std::to_string(i));
    }
    for (double b : B.B.data()) {
        if (!std::isfinite(b) || b <= 0.0) throw NonPositiveShock("shock entry must be finite and > 0");
    }
    check_elasticities(el);

    for (std::size_t i = 0; i < n; ++i) {
        if (!(sv.xi_hat[i] > 0.0) || !(sv.c_hat[i] > 0.0) || !(sv.a_hat[i] > 0.0) ||
            !(sv.l_hat[i] > 0.0))
            throw ValidationError("shift vectors must be strictly positive");
    }
    if (sv.c_is_explicit) {
        for (std::size_t i = 0; i < n; ++i)
            if (sv.a_hat[i] != 1.0 || sv.l_hat[i] != 1.0)
                throw ConflictingShifters("explicit c_hat cannot be combined with a_hat or l_hat");
    }
    if (!(cfg.tol > 0.0)) throw ValidationError("tol must be > 0");
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (!(cfg.damping > 0.0) || cfg.damping > 1.0) throw ValidationError("damping must be in (0,1]");
    if (cfg.mode != DeficitMode::Universal && !sv.xi_is_unit())
        throw XiWithoutUniversal("xi_hat != 1 requires universal mode");
}

}  // namespace ugrav

#endif  // UGRAV_DOMAIN_HPP
