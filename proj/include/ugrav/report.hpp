#ifndef UGRAV_REPORT_HPP
#define UGRAV_REPORT_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"

namespace ugrav {

/// N x 6 table of percent changes: Exports, Imports, IntlTrade, Domestic,
/// Output, Welfare.
struct ResultsTable {
    LocationIndex labels;
    Matrix columns;  ///< N x 6
    bool welfare_defined = true;

    static constexpr std::size_t kExports = 0;
    static constexpr std::size_t kImports = 1;
    static constexpr std::size_t kIntlTrade = 2;
    static constexpr std::size_t kDomestic = 3;
    static constexpr std::size_t kOutput = 4;
    static constexpr std::size_t kWelfare = 5;
};

/// Percent changes of real exports, imports, total international trade,
/// domestic trade, output, and welfare. Export/import changes are deflated
/// by p_hat and P_hat respectively; the IntlTrade column is the
/// baseline-weighted average of the two.
inline ResultsTable growth_table(const LocationIndex& labels, const Matrix& X, const Matrix& X_hat,
                                 const Solution& sol, const Vec& Q_hat, const Vec& W_hat) {
    const std::size_t n = X.rows();
    ResultsTable t;
    t.labels = labels;
    t.columns = Matrix(n, 6);
    t.welfare_defined = !W_hat.empty();

    for (std::size_t i = 0; i < n; ++i) {
        double exp0 = 0.0, exp1 = 0.0, imp0 = 0.0, imp1 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            exp0 += X(i, j);
            exp1 += X_hat(i, j) * X(i, j);
            imp0 += X(j, i);
            imp1 += X_hat(j, i) * X(j, i);
        }
        if (exp0 == 0.0 || imp0 == 0.0)
            throw NoInternationalTrade("no baseline international trade for " + labels.label(i));
        const double g_exp = 100.0 * (exp1 / exp0 / sol.p_hat[i] - 1.0);
        const double g_imp = 100.0 * (imp1 / imp0 / sol.P_hat[i] - 1.0);
        t.columns(i, ResultsTable::kExports) = g_exp;
        t.columns(i, ResultsTable::kImports) = g_imp;
        t.columns(i, ResultsTable::kIntlTrade) = (g_exp * exp0 + g_imp * imp0) / (exp0 + imp0);
        t.columns(i, ResultsTable::kDomestic) = 100.0 * (X_hat(i, i) / sol.P_hat[i] - 1.0);
        t.columns(i, ResultsTable::kOutput) = 100.0 * (Q_hat[i] - 1.0);
        t.columns(i, ResultsTable::kWelfare) = t.welfare_defined ? 100.0 * (W_hat[i] - 1.0) : 0.0;
    }
    return t;
}

/// Fixed-width text rendering, 3 decimals, one row per location.
inline std::string render_table(const ResultsTable& t) {
    const std::size_t n = t.labels.size();
    std::string out;
    out += "          Results for the prototypical trade model (percent changes)\n";
    out += "              |   Exports    Imports  IntlTrade   Domestic     Output    Welfare\n";
    char buf[64];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%13s |", t.labels.label(i).c_str());
        out += buf;
        for (std::size_t c = 0; c < 6; ++c) {
            if (c == ResultsTable::kWelfare && !t.welfare_defined) {
                std::snprintf(buf, sizeof(buf), "%11s", ".");
            } else {
                std::snprintf(buf, sizeof(buf), "%11.3f", t.columns(i, c));
            }
            out += buf;
        }
        out += '\n';
    }
    return out;
}

/// CSV rendering at full precision.
inline std::string table_to_csv(const ResultsTable& t) {
    std::string out = "location,exports,imports,intl_trade,domestic,output,welfare\n";
    char buf[64];
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        out += t.labels.label(i);
        for (std::size_t c = 0; c < 6; ++c) {
            if (c == ResultsTable::kWelfare && !t.welfare_defined) {
                out += ",";
            } else {
                std::snprintf(buf, sizeof(buf), ",%.17g", t.columns(i, c));
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace ugrav

#endif  // UGRAV_REPORT_HPP
