#ifndef UGRAV_ORACLE_HPP
#define UGRAV_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"
#include "ugrav/solver.hpp"
#include "ugrav/statics.hpp"

namespace ugrav {
namespace oracle {

/// Model primitives for the prototypical economy: iceberg costs, labor
/// productivity, labor, deficit parameters, TFP, labor share, substitution
/// elasticity, and the price-level normalization.
struct Primitives {
    Matrix tau;
    Vec A;
    Vec L;
    Vec xi;
    Vec Z;
    double zeta = 1.0;   ///< labor share in (0,1]
    double sigma = 2.0;  ///< elasticity of substitution, > 1
    double Ybar = 1.0;

    std::size_t size() const { return A.size(); }
    double theta() const { return sigma - 1.0; }
    double psi() const { return (1.0 - zeta) / zeta; }

    /// Composite supply shifter c_bar_i = A_i L_i Z_i^(1+psi).
    Vec cbar() const {
        Vec c(A.size());
        for (std::size_t i = 0; i < A.size(); ++i)
            c[i] = A[i] * L[i] * std::pow(Z[i], 1.0 + psi());
        return c;
    }

    void validate() const {
        const std::size_t n = size();
        if (n < 2) throw ValidationError("primitives need at least 2 locations");
        if (tau.rows() != n || tau.cols() != n || L.size() != n || xi.size() != n ||
            Z.size() != n)
            throw DimensionMismatch("primitives shapes disagree");
        if (!(zeta > 0.0) || zeta > 1.0) throw ValidationError("zeta must be in (0,1]");
        if (!(sigma > 1.0)) throw ValidationError("sigma must be > 1");
        if (!(Ybar > 0.0)) throw ValidationError("Ybar must be > 0");
        // tau > 0 rather than >= 1: shocked costs tau * B^(-1/theta) can
        // legitimately fall below one.
        for (double t : tau.data())
            if (!std::isfinite(t) || !(t > 0.0))
                throw ValidationError("tau entries must be finite and positive");
        for (std::size_t i = 0; i < n; ++i)
            if (!(A[i] > 0.0) || !(L[i] > 0.0) || !(xi[i] > 0.0) || !(Z[i] > 0.0))
                throw ValidationError("A, L, xi, Z must be strictly positive");
    }
};

/// Level equilibrium: prices, wages, quantities, flows.
struct Equilibrium {
    Vec p, P, w, Q, Y, E;
    double Xi = 1.0;
    Matrix X;
};

namespace detail {

inline Equilibrium assemble(const Primitives& prim, Vec p, Vec P, const Vec& E, double Xi) {
    const std::size_t n = prim.size();
    const double theta = prim.theta(), psi = prim.psi();
    const Vec cbar = prim.cbar();
    Equilibrium eq;
    eq.p = std::move(p);
    eq.P = std::move(P);
    eq.Xi = Xi;
    eq.Q.resize(n);
    eq.Y.resize(n);
    eq.w.resize(n);
    eq.E = E;
    eq.X = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        eq.Q[i] = cbar[i] * std::pow(eq.p[i] / eq.P[i], psi);
        eq.Y[i] = eq.p[i] * eq.Q[i];
        eq.w[i] = eq.Y[i] / prim.L[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            eq.X(i, j) = std::pow(prim.tau(i, j) * eq.p[i], -theta) * std::pow(eq.P[j], theta) *
                         eq.E[j];
    return eq;
}

}  // namespace detail

/// Solve the 2N-equation level system by staggered fixed-point iteration with
/// per-pass renormalization to sum(p_i Q_i) = Ybar.
///
/// With `fixed_deficits` set, expenditure is E_i = p_i Q_i + D_i for the
/// given deficit vector instead of E_i = Xi xi_i p_i Q_i; the backed-out
/// deficit parameters then satisfy Property 5 with Xi = 1.
inline Equilibrium solve_primitives(const Primitives& prim, double tol = 1e-13,
                                    long max_iter = 1000000, const Vec* fixed_deficits = nullptr,
                                    const Equilibrium* warm = nullptr) {
    prim.validate();
    const std::size_t n = prim.size();
    const double theta = prim.theta(), psi = prim.psi();
    const Vec cbar = prim.cbar();

    Vec p(n, 1.0), P(n, 1.0), Q(n), Y(n), E(n);
    if (warm) {
        p = warm->p;
        P = warm->P;
    }
    double Xi = 1.0;
    auto update_quantities = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            Q[i] = cbar[i] * std::pow(p[i] / P[i], psi);
            Y[i] = p[i] * Q[i];
        }
    };

    double crit = 0.0;
    for (long iter = 0; iter < max_iter; ++iter) {
        update_quantities();
        if (fixed_deficits) {
            Xi = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                E[i] = Y[i] + (*fixed_deficits)[i];
                if (E[i] <= 0.0) throw NonFinite("non-positive expenditure with fixed deficits");
            }
        } else {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                num += Y[i];
                den += prim.xi[i] * Y[i];
            }
            Xi = num / den;
            for (std::size_t i = 0; i < n; ++i) E[i] = Xi * prim.xi[i] * Y[i];
        }

        Vec p_next(n), P_next(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += std::pow(prim.tau(i, j), -theta) * std::pow(P[j], theta) * E[j];
            p_next[i] =
                std::pow(std::pow(P[i], psi) / cbar[i] * acc, 1.0 / (1.0 + theta + psi));
        }
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += std::pow(prim.tau(i, j) * p_next[i], -theta);
            P_next[j] = std::pow(acc, -1.0 / theta);
        }
        if (!all_finite_positive(p_next) || !all_finite_positive(P_next))
            throw NonFinite("non-positive price in level iteration " + std::to_string(iter));

        // Renormalize so sum p_i Q_i = Ybar; Q is invariant to a common scale.
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            total += p_next[i] * cbar[i] * std::pow(p_next[i] / P_next[i], psi);
        const double lambda = prim.Ybar / total;
        for (std::size_t i = 0; i < n; ++i) {
            p_next[i] *= lambda;
            P_next[i] *= lambda;
        }

        crit = sup_distance(p_next, p);
        p = std::move(p_next);
        P = std::move(P_next);
        if (crit < tol) {
            update_quantities();
            if (fixed_deficits) {
                for (std::size_t i = 0; i < n; ++i) E[i] = Y[i] + (*fixed_deficits)[i];
                Xi = 1.0;
            } else {
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    num += Y[i];
                    den += prim.xi[i] * Y[i];
                }
                Xi = num / den;
                for (std::size_t i = 0; i < n; ++i) E[i] = Xi * prim.xi[i] * Y[i];
            }
            return detail::assemble(prim, std::move(p), std::move(P), E, Xi);
        }
    }
    throw NotConverged("level system did not converge", max_iter, crit);
}

/// Elementwise ratios between two equilibria on the same location set.
struct HatSet {
    Vec p_hat, P_hat, Y_hat, E_hat, Q_hat, W_hat;
    Matrix X_hat;
    double Xi_hat = 1.0;
};

inline HatSet hats_from_equilibria(const Equilibrium& base, const Equilibrium& cf,
                                   const Primitives& base_prim, const Vec& xi_cf) {
    const std::size_t n = base.p.size();
    if (cf.p.size() != n) throw DimensionMismatch("equilibria have different sizes");
    HatSet h;
    h.p_hat.resize(n);
    h.P_hat.resize(n);
    h.Y_hat.resize(n);
    h.E_hat.resize(n);
    h.Q_hat.resize(n);
    h.W_hat.resize(n);
    h.X_hat = Matrix(n, n);
    h.Xi_hat = cf.Xi / base.Xi;
    for (std::size_t i = 0; i < n; ++i) {
        h.p_hat[i] = cf.p[i] / base.p[i];
        h.P_hat[i] = cf.P[i] / base.P[i];
        h.Y_hat[i] = cf.Y[i] / base.Y[i];
        h.E_hat[i] = cf.E[i] / base.E[i];
        h.Q_hat[i] = cf.Q[i] / base.Q[i];
        // W_i = Xi xi_i w_i / P_i
        h.W_hat[i] = (cf.Xi * xi_cf[i] * cf.w[i] / cf.P[i]) /
                     (base.Xi * base_prim.xi[i] * base.w[i] / base.P[i]);
        for (std::size_t j = 0; j < n; ++j) h.X_hat(i, j) = cf.X(i, j) / base.X(i, j);
    }
    return h;
}

/// Solve the counterfactual from shocked primitives and from the hat-algebra
/// solver, and return the maximum relative deviation across all compared
/// quantities. Universal mode shocks xi directly; Default mode holds the
/// baseline nominal deficits fixed in the counterfactual.
inline double crosscheck(const Primitives& prim, const ShockMatrix& B, const ShiftVectors& shifts,
                         DeficitMode mode, double tol = 1e-13) {
    const double theta = prim.theta();
    const std::size_t n = prim.size();

    const Equilibrium base = solve_primitives(prim, tol);

    Primitives cf = prim;
    for (std::size_t i = 0; i < n; ++i) {
        cf.A[i] *= shifts.a_hat[i];
        cf.L[i] *= shifts.l_hat[i];
        for (std::size_t j = 0; j < n; ++j)
            cf.tau(i, j) = prim.tau(i, j) * std::pow(B.B(i, j), -1.0 / theta);
    }
    Equilibrium cfe;
    Vec xi_cf = prim.xi;
    if (mode == DeficitMode::Default) {
        Vec D(n);
        for (std::size_t i = 0; i < n; ++i) D[i] = base.E[i] - base.Y[i];
        cfe = solve_primitives(cf, tol, 1000000, &D, &base);
        for (std::size_t i = 0; i < n; ++i) xi_cf[i] = cfe.E[i] / cfe.Y[i];
        cf.xi = xi_cf;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            cf.xi[i] = prim.xi[i] * shifts.xi_hat[i];
            xi_cf[i] = cf.xi[i];
        }
        cfe = solve_primitives(cf, tol);
    }
    const HatSet expected = hats_from_equilibria(base, cfe, prim, xi_cf);

    TradeMatrix X{base.X};
    Elasticities el{theta, prim.psi()};
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.tol = tol;
    const Solution sol = solve(X, B, el, shifts, cfg);
    const StaticsBundle st = derive_statics(X, B, el, shifts, sol);

    double dev = 0.0;
    auto cmp = [&dev](double got, double want) {
        dev = std::max(dev, std::abs(got - want) / std::abs(want));
    };
    for (std::size_t i = 0; i < n; ++i) {
        cmp(sol.p_hat[i], expected.p_hat[i]);
        cmp(sol.P_hat[i], expected.P_hat[i]);
        cmp(st.Y_hat[i], expected.Y_hat[i]);
        cmp(st.E_hat[i], expected.E_hat[i]);
        cmp(st.Q_hat[i], expected.Q_hat[i]);
        if (st.welfare_defined) cmp(st.W_hat[i], expected.W_hat[i]);
        for (std::size_t j = 0; j < n; ++j) cmp(st.X_hat(i, j), expected.X_hat(i, j));
    }
    if (mode == DeficitMode::Universal) cmp(sol.Xi_hat, expected.Xi_hat);
    return dev;
}

// ---------------------------------------------------------------------------
// Fixture file format: "key value..." lines plus a "tau" block of N rows.

inline Primitives load_primitives(std::istream& in) {
    Primitives prim;
    std::size_t n = 0;
    std::string key;
    auto read_vec = [&](std::istream& s) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i)
            if (!(s >> v[i])) throw IoError("short vector in primitives file");
        return v;
    };
    while (in >> key) {
        if (key == "n") {
            in >> n;
            prim.A.assign(n, 1.0);
            prim.L.assign(n, 1.0);
            prim.xi.assign(n, 1.0);
            prim.Z.assign(n, 1.0);
            prim.tau = Matrix::ones(n);
        } else if (key == "zeta") {
            in >> prim.zeta;
        } else if (key == "sigma") {
            in >> prim.sigma;
        } else if (key == "Ybar") {
            in >> prim.Ybar;
        } else if (key == "A") {
            prim.A = read_vec(in);
        } else if (key == "L") {
            prim.L = read_vec(in);
        } else if (key == "xi") {
            prim.xi = read_vec(in);
        } else if (key == "Z") {
            prim.Z = read_vec(in);
        } else if (key == "tau") {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!(in >> prim.tau(i, j))) throw IoError("short tau block");
        } else {
            throw IoError("unknown key in primitives file: " + key);
        }
    }
    if (n == 0) throw IoError("primitives file missing 'n'");
    prim.validate();
    return prim;
}

inline Primitives load_primitives_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load_primitives(in);
}

}  // namespace oracle
}  // namespace ugrav

#endif  // UGRAV_ORACLE_HPP
