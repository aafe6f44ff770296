#ifndef UGRAV_STATICS_HPP
#define UGRAV_STATICS_HPP

#include <cmath>
#include <cstddef>

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"

namespace ugrav {

/// Y_hat = c_hat * p_hat * (p_hat/P_hat)^psi
inline Vec income_hat(const Solution& sol, const Vec& c_hat, double psi) {
    const std::size_t n = sol.p_hat.size();
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = c_hat[i] * sol.p_hat[i] * std::pow(sol.p_hat[i] / sol.P_hat[i], psi);
    return y;
}

/// E_hat = Xi_hat * xi_hat * Y_hat
inline Vec expenditure_hat(const Vec& Y_hat, const Vec& xi_hat_effective, double Xi_hat) {
    const std::size_t n = Y_hat.size();
    Vec e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = Xi_hat * xi_hat_effective[i] * Y_hat[i];
    return e;
}

/// X_hat_ij = B_ij (p_hat_i / P_hat_j)^(-theta) E_hat_j; X_prime = X_hat .* X
inline std::pair<Matrix, Matrix> flows_hat(const Solution& sol, const ShockMatrix& B,
                                           const Matrix& X, const Vec& E_hat, double theta) {
    const std::size_t n = sol.p_hat.size();
    Matrix x_hat(n, n), x_prime(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = std::pow(sol.p_hat[i], -theta);
        for (std::size_t j = 0; j < n; ++j) {
            x_hat(i, j) = B.B(i, j) * pi * std::pow(sol.P_hat[j], theta) * E_hat[j];
            x_prime(i, j) = x_hat(i, j) * X(i, j);
        }
    }
    return {std::move(x_hat), std::move(x_prime)};
}

/// Q_hat = c_hat * (p_hat/P_hat)^psi
inline Vec output_hat(const Solution& sol, const Vec& c_hat, double psi) {
    const std::size_t n = sol.p_hat.size();
    Vec q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = c_hat[i] * std::pow(sol.p_hat[i] / sol.P_hat[i], psi);
    return q;
}

/// W_hat = Xi_hat * xi_hat * A_hat * (p_hat/P_hat)^(1+psi).
/// Undefined (empty) when c_hat was supplied explicitly.
inline Vec welfare_hat(const Solution& sol, const ShiftVectors& shifts, double psi) {
    if (shifts.c_is_explicit) return {};
    const std::size_t n = sol.p_hat.size();
    Vec w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = sol.Xi_hat * sol.xi_hat_effective[i] * shifts.a_hat[i] *
               std::pow(sol.p_hat[i] / sol.P_hat[i], 1.0 + psi);
    return w;
}

/// Real and nominal wage changes (prototypical model only).
inline std::pair<Vec, Vec> wage_hats(const Solution& sol, const ShiftVectors& shifts, double psi) {
    if (shifts.c_is_explicit)
        throw UndefinedForExplicitC("wage changes are undefined with an explicit c_hat");
    const std::size_t n = sol.p_hat.size();
    Vec rw(n), nw(n);
    for (std::size_t i = 0; i < n; ++i) {
        rw[i] = shifts.a_hat[i] * std::pow(sol.p_hat[i] / sol.P_hat[i], 1.0 + psi);
        nw[i] = shifts.a_hat[i] * std::pow(sol.p_hat[i], 1.0 + psi) / std::pow(sol.P_hat[i], psi);
    }
    return {std::move(rw), std::move(nw)};
}

/// Compute the full bundle of counterfactual changes and levels from a
/// converged solution.
inline StaticsBundle derive_statics(const TradeMatrix& X, const ShockMatrix& B,
                                    const Elasticities& el, const ShiftVectors& shifts,
                                    const Solution& sol) {
    StaticsBundle s;
    s.Y_hat = income_hat(sol, shifts.c_hat, el.psi);
    s.E_hat = expenditure_hat(s.Y_hat, sol.xi_hat_effective, sol.Xi_hat);
    auto [x_hat, x_prime] = flows_hat(sol, B, X.X, s.E_hat, el.theta);
    s.X_hat = std::move(x_hat);
    s.X_prime = std::move(x_prime);
    s.Q_hat = output_hat(sol, shifts.c_hat, el.psi);
    s.welfare_defined = !shifts.c_is_explicit;
    if (s.welfare_defined) {
        s.W_hat = welfare_hat(sol, shifts, el.psi);
        auto [rw, nw] = wage_hats(sol, shifts, el.psi);
        s.rw_hat = std::move(rw);
        s.nw_hat = std::move(nw);
    }
    const std::size_t n = sol.p_hat.size();
    s.rp.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.rp[i] = sol.p_hat[i] / sol.P_hat[i];
    s.Y_prime = row_sums(s.X_prime);
    s.E_prime = col_sums(s.X_prime);
    return s;
}

}  // namespace ugrav

#endif  // UGRAV_STATICS_HPP
