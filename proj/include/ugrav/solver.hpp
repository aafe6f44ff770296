#ifndef UGRAV_SOLVER_HPP
#define UGRAV_SOLVER_HPP

#include <cmath>
#include <cstddef>
#include <string>

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"

namespace ugrav {

inline Marginals compute_marginals(const TradeMatrix& X) {
    Marginals m;
    m.Y = row_sums(X.X);
    m.E = col_sums(X.X);
    m.Ybar = sum(m.Y);
    const std::size_t n = m.Y.size();
    m.delta.resize(n);
    m.D.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m.Y[i] <= 0.0)
            throw ZeroMarginal("zero income at index " + std::to_string(i));
        if (m.E[i] <= 0.0)
            throw ZeroMarginal("zero expenditure at index " + std::to_string(i));
        m.D[i] = m.E[i] - m.Y[i];
        m.delta[i] = m.D[i] / m.Y[i];
    }
    return m;
}

/// Endogenous xi_hat keeping nominal deficits constant:
///   xi_hat_i = (1/Xi_hat) * (1 + delta_i/(1+delta_i) * (P_hat_i^psi / (c_hat_i p_hat_i^(1+psi)) - 1))
inline Vec step_xi_hat(const Vec& delta, const Vec& c_hat, const Vec& p_hat, const Vec& P_hat,
                       double Xi_hat, double psi) {
    const std::size_t n = delta.size();
    Vec xi(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (delta[i] == -1.0)
            throw DegenerateDeficit("delta_i = -1 at index " + std::to_string(i));
        const double y_hat = c_hat[i] * std::pow(p_hat[i], 1.0 + psi) / std::pow(P_hat[i], psi);
        xi[i] = (1.0 + delta[i] / (1.0 + delta[i]) * (1.0 / y_hat - 1.0)) / Xi_hat;
    }
    return xi;
}

/// Xi_hat = Ybar / sum_i xi_hat_i c_hat_i p_hat_i (p_hat_i/P_hat_i)^psi E_i
inline double step_Xi_hat(const Vec& xi_hat, const Vec& c_hat, const Vec& p_hat, const Vec& P_hat,
                          const Vec& E, double Ybar, double psi) {
    double denom = 0.0;
    for (std::size_t i = 0; i < xi_hat.size(); ++i)
        denom += xi_hat[i] * c_hat[i] * p_hat[i] * std::pow(p_hat[i] / P_hat[i], psi) * E[i];
    return Ybar / denom;
}

/// One fixed-point update of p_hat (uses the previous P_hat).
inline Vec step_p_hat(const Vec& p_hat, const Vec& P_hat, double Xi_hat, const Matrix& X,
                      const Matrix& B, const Vec& Y, const Elasticities& el, const Vec& xi_hat,
                      const Vec& c_hat) {
    const std::size_t n = p_hat.size();
    const double theta = el.theta, psi = el.psi;
    Vec weight(n);
    for (std::size_t j = 0; j < n; ++j)
        weight[j] = xi_hat[j] * c_hat[j] * std::pow(P_hat[j], theta - psi) *
                    std::pow(p_hat[j], 1.0 + psi);
    Vec next(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += X(i, j) / Y[i] * B(i, j) * weight[j];
        next[i] = std::pow(Xi_hat * std::pow(P_hat[i], psi) / c_hat[i] * acc,
                           1.0 / (1.0 + theta + psi));
    }
    if (!all_finite_positive(next)) throw NonFinite("non-finite p_hat update");
    return next;
}

/// One fixed-point update of P_hat (uses the freshly updated p_hat).
inline Vec step_P_hat(const Vec& p_hat_next, const Matrix& X, const Matrix& B, const Vec& E,
                      double theta) {
    const std::size_t n = p_hat_next.size();
    Vec pw(n);
    for (std::size_t j = 0; j < n; ++j) pw[j] = std::pow(p_hat_next[j], -theta);
    Vec next(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += X(j, i) / E[i] * B(j, i) * pw[j];
        next[i] = std::pow(acc, -1.0 / theta);
    }
    if (!all_finite_positive(next)) throw NonFinite("non-finite P_hat update");
    return next;
}

/// Solve the 2N+1 hat-algebra system by fixed-point iteration.
///
/// Default mode recomputes xi_hat each pass so that nominal deficits stay
/// constant; Universal mode keeps xi_hat at the supplied value;
/// Multiplicative mode runs Universal with xi_hat = 1 and rescales Xi_hat to
/// one after convergence.
inline Solution solve(const TradeMatrix& X, const ShockMatrix& B, const Elasticities& el,
                      const ShiftVectors& shifts, const SolverConfig& cfg) {
    const Marginals m = compute_marginals(X);
    const std::size_t n = m.Y.size();
    const double psi = el.psi;

    Vec p_hat(n, 1.0), P_hat(n, 1.0);
    Vec xi_hat = (cfg.mode == DeficitMode::Multiplicative) ? Vec(n, 1.0) : shifts.xi_hat;
    double Xi_hat = 1.0;

    Solution sol;
    double crit = 0.0;
    long iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
        if (cfg.mode == DeficitMode::Default)
            xi_hat = step_xi_hat(m.delta, shifts.c_hat, p_hat, P_hat, Xi_hat, psi);
        Xi_hat = step_Xi_hat(xi_hat, shifts.c_hat, p_hat, P_hat, m.E, m.Ybar, psi);
        Vec p_next = step_p_hat(p_hat, P_hat, Xi_hat, X.X, B.B, m.Y, el, xi_hat, shifts.c_hat);
        Vec P_next = step_P_hat(p_next, X.X, B.B, m.E, el.theta);
        if (cfg.damping < 1.0) {
            for (std::size_t i = 0; i < n; ++i)
                p_next[i] = std::pow(p_hat[i], 1.0 - cfg.damping) * std::pow(p_next[i], cfg.damping);
        }
        crit = sup_distance(p_next, p_hat);
        p_hat = std::move(p_next);
        P_hat = std::move(P_next);
        if (!all_finite_positive(p_hat) || !all_finite_positive(P_hat))
            throw NonFinite("non-positive price at iteration " + std::to_string(iter));
        if (crit < cfg.tol) {
            ++iter;
            sol.converged = true;
            break;
        }
    }

    sol.p_hat = std::move(p_hat);
    sol.P_hat = std::move(P_hat);
    sol.xi_hat_effective = std::move(xi_hat);
    sol.Xi_hat_system = Xi_hat;
    sol.Xi_hat = (cfg.mode == DeficitMode::Multiplicative) ? 1.0 : Xi_hat;
    if (cfg.mode == DeficitMode::Default) {
        // The system pins only the product Xi_hat * xi_hat when xi_hat is
        // endogenous; fold the constant into xi_hat so that Xi_hat = 1, the
        // convention under which deficits are kept constant in levels. This
        // leaves every equation of the system satisfied.
        for (double& x : sol.xi_hat_effective) x *= Xi_hat;
        sol.Xi_hat = sol.Xi_hat_system = 1.0;
    }
    sol.n_iter = iter;
    sol.crit = crit;
    if (!sol.converged)
        throw NotConverged("no convergence after " + std::to_string(iter) + " iterations (crit " +
                               std::to_string(crit) + ")",
                           iter, crit);
    return sol;
}

struct Residuals {
    Vec r1;         ///< income block
    Vec r2;         ///< price-index block
    double r3 = 0;  ///< Xi_hat normalization
};

/// Direct evaluation of the 2N+1 equation system at a candidate solution.
/// Uses Xi_hat_system so that Multiplicative-mode solutions are checked
/// against the system they actually solved.
inline Residuals residuals(const TradeMatrix& X, const ShockMatrix& B, const Elasticities& el,
                           const ShiftVectors& shifts, const Solution& sol) {
    const Marginals m = compute_marginals(X);
    const std::size_t n = m.Y.size();
    const double theta = el.theta, psi = el.psi;
    const Vec& p = sol.p_hat;
    const Vec& P = sol.P_hat;
    const Vec& xi = sol.xi_hat_effective;
    const Vec& c = shifts.c_hat;
    const double Xi = sol.Xi_hat_system;

    Residuals r;
    r.r1.resize(n);
    r.r2.resize(n);
    Vec w(n);
    for (std::size_t j = 0; j < n; ++j)
        w[j] = std::pow(P[j], theta) * p[j] * xi[j] * c[j] * std::pow(p[j] / P[j], psi);
    for (std::size_t i = 0; i < n; ++i) {
        double rhs1 = 0.0, rhs2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            rhs1 += X.X(i, j) / m.Y[i] * B.B(i, j) * w[j];
            rhs2 += X.X(j, i) / m.E[i] * B.B(j, i) * std::pow(p[j], -theta);
        }
        r.r1[i] = std::pow(p[i], 1.0 + theta + psi) * std::pow(P[i], -psi) * c[i] - Xi * rhs1;
        r.r2[i] = std::pow(P[i], -theta) - rhs2;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += xi[i] * c[i] * std::pow(p[i], 1.0 + psi) / std::pow(P[i], psi) * (m.E[i] / m.Ybar);
    r.r3 = Xi * acc - 1.0;
    return r;
}

}  // namespace ugrav

#endif  // UGRAV_SOLVER_HPP
