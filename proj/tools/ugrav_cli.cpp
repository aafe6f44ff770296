// Command-line front end: ingest a long-format bilateral trade CSV, solve the
// counterfactual per group, and emit results tables, output columns, and a
// machine-readable run summary.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ugrav/ugrav.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string input;
    std::string output;
    std::string summary;
    std::string results_csv;
    ugrav::CsvColumns columns;
    std::string by;
    double theta = 0.0;
    double psi = 0.0;
    double tol = 1e-12;
    long max_iter = 1000000;
    double damping = 1.0;
    bool universal = false;
    bool multiplicative = false;
    bool results = false;
    std::string a_hat_file, l_hat_file, c_hat_file, xi_hat_file;
    bool gen_X = false, gen_x = false, gen_rp = false, gen_y = false, gen_p = false;
    bool gen_Pindex = false, gen_w = false, gen_q = false, gen_rw = false, gen_nw = false;
    int jobs = 1;
};

struct GroupOutcome {
    const ugrav::PanelSlice* slice = nullptr;
    ugrav::Solution sol;
    ugrav::StaticsBundle statics;
    ugrav::ShiftVectors shifts;
    std::string error;
    int exit_code = kExitOk;
};

ugrav::DeficitMode mode_of(const Options& opt) {
    if (opt.universal) return ugrav::DeficitMode::Universal;
    if (opt.multiplicative) return ugrav::DeficitMode::Multiplicative;
    return ugrav::DeficitMode::Default;
}

ugrav::ShiftVectors build_shifts(const Options& opt, const ugrav::LocationIndex& index) {
    const std::size_t n = index.size();
    ugrav::Vec xi(n, 1.0);
    if (!opt.xi_hat_file.empty()) xi = ugrav::read_shifter_csv_file(opt.xi_hat_file, index);
    if (!opt.c_hat_file.empty())
        return ugrav::ShiftVectors::from_c(ugrav::read_shifter_csv_file(opt.c_hat_file, index),
                                           std::move(xi));
    ugrav::Vec a(n, 1.0), l(n, 1.0);
    if (!opt.a_hat_file.empty()) a = ugrav::read_shifter_csv_file(opt.a_hat_file, index);
    if (!opt.l_hat_file.empty()) l = ugrav::read_shifter_csv_file(opt.l_hat_file, index);
    return ugrav::ShiftVectors::from_a_l(std::move(a), std::move(l), std::move(xi));
}

GroupOutcome solve_group(const ugrav::PanelSlice& slice, const Options& opt) {
    GroupOutcome out;
    out.slice = &slice;
    try {
        const ugrav::ShockMatrix B = ugrav::shock_from_partial(slice.partial);
        out.shifts = build_shifts(opt, slice.index);
        ugrav::Elasticities el{opt.theta, opt.psi};
        ugrav::SolverConfig cfg;
        cfg.mode = mode_of(opt);
        cfg.tol = opt.tol;
        cfg.max_iter = opt.max_iter;
        cfg.damping = opt.damping;
        ugrav::validate_inputs(slice.X, B, el, out.shifts, cfg);
        out.sol = ugrav::solve(slice.X, B, el, out.shifts, cfg);
        out.statics = ugrav::derive_statics(slice.X, B, el, out.shifts, out.sol);
    } catch (const ugrav::NotConverged& e) {
        out.error = e.what();
        out.exit_code = kExitConvergence;
    } catch (const ugrav::IoError& e) {
        out.error = e.what();
        out.exit_code = kExitIo;
    } catch (const ugrav::Error& e) {
        out.error = e.what();
        out.exit_code = kExitValidation;
    }
    return out;
}

void append_output_rows(std::string& csv, const GroupOutcome& g, const Options& opt) {
    const auto& slice = *g.slice;
    const std::size_t n = slice.index.size();
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::string row = slice.index.label(i) + "," + slice.index.label(j);
            if (slice.group) row += "," + *slice.group;
            row += num(slice.X.X(i, j));
            // Country-level columns carry the origin-country value.
            if (opt.gen_X) row += num(g.statics.X_prime(i, j));
            if (opt.gen_x) row += num(g.statics.X_hat(i, j));
            if (opt.gen_rp) row += num(g.statics.rp[i]);
            if (opt.gen_y) row += num(g.statics.Y_hat[i]);
            if (opt.gen_p) row += num(g.sol.p_hat[i]);
            if (opt.gen_Pindex) row += num(g.sol.P_hat[i]);
            if (opt.gen_w) {
                if (!g.statics.welfare_defined)
                    row += ",";
                else
                    row += num(g.statics.W_hat[i]);
            }
            if (opt.gen_q) row += num(g.statics.Q_hat[i]);
            if (opt.gen_rw) {
                if (!g.statics.welfare_defined)
                    row += ",";
                else
                    row += num(g.statics.rw_hat[i]);
            }
            if (opt.gen_nw) {
                if (!g.statics.welfare_defined)
                    row += ",";
                else
                    row += num(g.statics.nw_hat[i]);
            }
            csv += row;
            csv += '\n';
        }
    }
}

std::string output_header(const Options& opt, bool grouped) {
    std::string h = opt.columns.origin + "," + opt.columns.destination;
    if (grouped) h += "," + opt.by;
    h += "," + opt.columns.flow;
    if (opt.gen_X) h += ",X_prime";
    if (opt.gen_x) h += ",X_hat";
    if (opt.gen_rp) h += ",rp";
    if (opt.gen_y) h += ",Y_hat";
    if (opt.gen_p) h += ",p_hat";
    if (opt.gen_Pindex) h += ",P_hat";
    if (opt.gen_w) h += ",W_hat";
    if (opt.gen_q) h += ",Q_hat";
    if (opt.gen_rw) h += ",rw_hat";
    if (opt.gen_nw) h += ",nw_hat";
    return h;
}

bool any_gen(const Options& opt) {
    return opt.gen_X || opt.gen_x || opt.gen_rp || opt.gen_y || opt.gen_p || opt.gen_Pindex ||
           opt.gen_w || opt.gen_q || opt.gen_rw || opt.gen_nw;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"General-equilibrium counterfactuals for universal gravity trade models"};
    app.add_option("input", opt.input, "Long-format CSV with bilateral flows and partial effects")
        ->required();
    app.add_option("--theta", opt.theta, "Trade elasticity (> 0)")->required();
    app.add_option("--psi", opt.psi, "Supply elasticity (>= 0, default 0)");
    app.add_option("--tol", opt.tol, "Convergence tolerance on p_hat (default 1e-12)");
    app.add_option("--max-iter", opt.max_iter, "Maximum iterations (default 1000000)");
    app.add_option("--damping", opt.damping, "Damping factor in (0,1], default 1 (none)");
    auto* uni = app.add_flag("--universal", opt.universal, "Universal deficit mode");
    auto* mult =
        app.add_flag("--multiplicative", opt.multiplicative, "Multiplicative deficit mode");
    uni->excludes(mult);
    app.add_flag("--results", opt.results, "Print the results table");
    app.add_option("--results-csv", opt.results_csv, "Write the results table(s) as CSV");
    app.add_option("--by", opt.by, "Column to split the panel into groups");
    app.add_option("--exp-col", opt.columns.origin, "Origin column name (default exp_id)");
    app.add_option("--imp-col", opt.columns.destination,
                   "Destination column name (default imp_id)");
    app.add_option("--flow-col", opt.columns.flow, "Flow column name (default flow)");
    app.add_option("--partial-col", opt.columns.partial, "Partial column name (default partial)");
    app.add_option("--a-hat", opt.a_hat_file, "CSV (location,value) of productivity changes");
    app.add_option("--l-hat", opt.l_hat_file, "CSV (location,value) of labor-force changes");
    app.add_option("--c-hat", opt.c_hat_file,
                   "CSV (location,value) of supply-shifter changes (suppresses welfare)");
    app.add_option("--xi-hat", opt.xi_hat_file,
                   "CSV (location,value) of deficit-parameter changes (requires --universal)");
    app.add_flag("--gen-X", opt.gen_X, "Output counterfactual flows X'");
    app.add_flag("--gen-x", opt.gen_x, "Output flow changes X_hat");
    app.add_flag("--gen-rp", opt.gen_rp, "Output real price changes p_hat/P_hat");
    app.add_flag("--gen-y", opt.gen_y, "Output income changes Y_hat");
    app.add_flag("--gen-p", opt.gen_p, "Output output-price changes p_hat");
    app.add_flag("--gen-Pindex", opt.gen_Pindex, "Output price-index changes P_hat");
    app.add_flag("--gen-w", opt.gen_w, "Output welfare changes W_hat");
    app.add_flag("--gen-q", opt.gen_q, "Output output changes Q_hat");
    app.add_flag("--gen-rw", opt.gen_rw, "Output real wage changes");
    app.add_flag("--gen-nw", opt.gen_nw, "Output nominal wage changes");
    app.add_option("--output", opt.output, "Output CSV path for --gen-* columns");
    app.add_option("--summary", opt.summary, "Write a JSON run summary");
    app.add_option("--jobs", opt.jobs, "Max concurrent group solves (default 1)");
    CLI11_PARSE(app, argc, argv);

    if (!opt.c_hat_file.empty() && (!opt.a_hat_file.empty() || !opt.l_hat_file.empty())) {
        std::cerr << "error: --c-hat may not be combined with --a-hat or --l-hat\n";
        return kExitValidation;
    }
    if (!opt.xi_hat_file.empty() && !opt.universal) {
        std::cerr << "error: --xi-hat requires --universal\n";
        return kExitValidation;
    }
    if (any_gen(opt) && opt.output.empty()) {
        std::cerr << "error: --gen-* options require --output\n";
        return kExitValidation;
    }

    ugrav::CsvColumns cols = opt.columns;
    if (!opt.by.empty()) cols.group = opt.by;

    std::vector<ugrav::PanelSlice> slices;
    std::vector<ugrav::GroupError> failures;
    try {
        std::cerr << "sorting...\n";
        const auto rows = ugrav::read_long_csv_file(opt.input, cols);
        slices = ugrav::split_groups(rows, failures);
    } catch (const ugrav::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ugrav::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    std::cerr << "solving...\n";
    std::vector<GroupOutcome> outcomes(slices.size());
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || slices.size() <= 1) {
        for (std::size_t i = 0; i < slices.size(); ++i) outcomes[i] = solve_group(slices[i], opt);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const std::size_t nworkers = std::min<std::size_t>(jobs, slices.size());
        for (std::size_t w = 0; w < nworkers; ++w) {
            workers.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < slices.size(); i = next.fetch_add(1))
                    outcomes[i] = solve_group(slices[i], opt);
            });
        }
        for (auto& t : workers) t.join();
    }

    int exit_code = failures.empty() ? kExitOk : kExitValidation;
    for (const auto& f : failures)
        std::cerr << "error: group '" << f.group << "': " << f.message << "\n";

    std::string output_csv;
    const bool grouped = !opt.by.empty();
    if (any_gen(opt)) output_csv = output_header(opt, grouped) + "\n";
    std::string results_csv;

    nlohmann::json summary = nlohmann::json::array();
    for (const auto& g : outcomes) {
        const std::string key = g.slice->group.value_or("");
        if (g.exit_code != kExitOk) {
            std::cerr << "error: group '" << key << "': " << g.error << "\n";
            exit_code = std::max(exit_code, g.exit_code);
            continue;
        }
        if (opt.results || !opt.results_csv.empty()) {
            try {
                const auto table = ugrav::growth_table(
                    g.slice->index, g.slice->X.X, g.statics.X_hat, g.sol, g.statics.Q_hat,
                    g.statics.welfare_defined ? g.statics.W_hat : ugrav::Vec{});
                if (opt.results) {
                    if (grouped) std::cout << "group: " << key << "\n";
                    std::cout << ugrav::render_table(table);
                }
                if (!opt.results_csv.empty()) {
                    if (grouped) results_csv += "# group: " + key + "\n";
                    results_csv += ugrav::table_to_csv(table);
                }
            } catch (const ugrav::Error& e) {
                std::cerr << "error: group '" << key << "': " << e.what() << "\n";
                exit_code = std::max(exit_code, kExitValidation);
            }
        }
        if (any_gen(opt)) append_output_rows(output_csv, g, opt);
        nlohmann::json entry;
        entry["group"] = key;
        entry["theta"] = opt.theta;
        entry["psi"] = opt.psi;
        entry["N"] = g.slice->index.size();
        entry["crit"] = g.sol.crit;
        entry["n_iter"] = g.sol.n_iter;
        entry["Xi_hat"] = g.sol.Xi_hat;
        entry["mode"] = ugrav::to_string(mode_of(opt));
        entry["converged"] = g.sol.converged;
        entry["labels"] = g.slice->index.labels();
        summary.push_back(std::move(entry));
    }

    try {
        if (any_gen(opt)) {
            std::ofstream out(opt.output);
            if (!out) throw ugrav::IoError("cannot write " + opt.output);
            out << output_csv;
        }
        if (!opt.results_csv.empty()) {
            std::ofstream out(opt.results_csv);
            if (!out) throw ugrav::IoError("cannot write " + opt.results_csv);
            out << results_csv;
        }
        if (!opt.summary.empty()) {
            std::ofstream out(opt.summary);
            if (!out) throw ugrav::IoError("cannot write " + opt.summary);
            out << summary.dump(2) << "\n";
        }
    } catch (const ugrav::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    if (exit_code == kExitOk) std::cerr << "solved!\n";
    return exit_code;
}
