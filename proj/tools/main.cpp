#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "katolim/errors.hpp"
#include "katolim/io.hpp"

using namespace katolim;

namespace {

struct CommonOpts {
    double tol_rank = tol::rank;
    double tol_group = tol::group;
    double p_max = 4096.0;
    double alpha = 0.5;
    std::string format = "table";
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--tol-rank", opt.tol_rank, "rank tolerance (relative)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-group", opt.tol_group, "eigenvalue clustering tolerance (relative)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--p-max", opt.p_max, "largest dyadic grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
}

void emit(const CommonOpts& opt, const io::json& j, const std::string& table) {
    if (opt.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << table;
    }
}

std::string matrix_block(const std::string& name, const Matrix& m) {
    return name + ":\n" + io::format_matrix_table(m);
}

int run_selftest() {
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    // Corner fixture: a non-unital map separating the two limit notions.
    {
        Matrix k1(2, 2), k2(2, 2);
        k1(0, 0) = 1.0;
        const double s = 1.0 / std::sqrt(2.0);
        k2(0, 1) = s;
        k2(1, 1) = s;
        const auto phi = PositiveMapSpec::kraus({k1, k2});
        const PSDMatrix a = PSDMatrix::from(Matrix::diagonal({2.0, 1.0}));
        const auto pos = map_limit(phi, a);
        const auto neg = neg_map_limit(phi, a);
        Matrix want_pos = Matrix::diagonal({2.0, 1.0});
        Matrix want_neg(2, 2);
        want_neg(0, 0) = want_neg(1, 1) = 1.5;
        want_neg(0, 1) = want_neg(1, 0) = -0.5;
        const bool ok = (pos.limit.mat() - want_pos).max_abs() < 1e-10 &&
                        (neg.limit.mat() - want_neg).max_abs() < 1e-10 &&
                        loewner_compare(HermitianMatrix::symmetrized(pos.limit.mat() -
                                                                     neg.limit.mat()),
                                        HermitianMatrix::symmetrized(Matrix::zero(2, 2))) ==
                            LoewnerOrder::incomparable;
        report("non-unital corner map separates the limit notions", ok);
    }
    // Singular state fixture: generalized inverse vs epsilon regularization.
    {
        Matrix rho(2, 2);
        rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
        const auto phi = PositiveMapSpec::trace_state(PSDMatrix::from(rho));
        const PSDMatrix a = PSDMatrix::from(Matrix::diagonal({1.0, 0.0}));
        const auto neg = neg_map_limit(phi, a);
        const auto eps = epsilon_neg_limit(phi, a, 2.0);
        const auto pos = sweep_map(phi, a, {1.0, 2.0, 4.0});
        bool ok = std::abs(neg.limit(0, 0).real() - 1.0) < 1e-10 &&
                  std::abs(eps.value(0, 0).real()) < 1e-8;
        for (std::size_t i = 0; i < pos.p_grid.size(); ++i)
            ok = ok && std::abs(pos.iterates[i](0, 0).real() -
                                std::pow(2.0, -1.0 / pos.p_grid[i])) < 1e-12;
        report("singular state: the two inverse-power definitions differ", ok);
    }
    // Commuting supremum.
    {
        const PSDMatrix a = PSDMatrix::from(Matrix::diagonal({2.0, 1.0}));
        const PSDMatrix b = PSDMatrix::from(Matrix::diagonal({1.0, 3.0}));
        const bool ok =
            (spectral_sup(a, b).mat() - Matrix::diagonal({2.0, 3.0})).max_abs() < 1e-12;
        report("commuting spectral supremum is the entrywise maximum", ok);
    }
    // Projection base of the weighted geometric limit.
    {
        Matrix e(2, 2);
        e(0, 0) = e(0, 1) = e(1, 0) = e(1, 1) = 0.5;
        const PSDMatrix p = PSDMatrix::from(Matrix::diagonal({1.0, 0.0}));
        const PSDMatrix ep = PSDMatrix::from(e);
        const auto lim = geometric_limit(p, ep, 0.5);
        const auto meet = projection_meet(Projection::from(Matrix::diagonal({1.0, 0.0})),
                                          Projection::from(e));
        const auto swp = sweep_mean(MeanSpec::geometric(0.5), p, ep, {1.0, 16.0, 256.0, 4096.0});
        bool ok = (lim.mat() - meet.mat()).max_abs() < 1e-10;
        for (const auto& it : swp.iterates) ok = ok && (it.mat() - meet.mat()).max_abs() < 1e-9;
        report("projection base: geometric limit is the lattice meet, sweep flat", ok);
    }
    std::printf("%d/4 fixtures passed\n", 4 - failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form p->infinity matrix limits with a numeric sweep oracle"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string k_path, a_path, b_path, map_path, rho_path, sigma_path, mean_text, target_path;
    double alpha_renyi = 0.0;
    double eps_at_p = 0.0;
    bool sweep_neg = false, sweep_sandwich_mode = false, sweep_inf_mode = false;
    bool serial = false;

    auto* limit = app.add_subcommand("limit", "congruence limit of (K A^p K*)^{1/p}");
    limit->add_option("--K", k_path, "operator matrix file")->required();
    limit->add_option("--A", a_path, "positive semidefinite matrix file")->required();
    add_common(limit, opt);

    auto* maplim = app.add_subcommand("map-limit", "limit of Phi(A^p)^{1/p}");
    maplim->add_option("--map", map_path, "map spec file")->required();
    maplim->add_option("--A", a_path, "positive semidefinite matrix file")->required();
    add_common(maplim, opt);

    auto* neglim = app.add_subcommand("neg-limit", "limit of Phi(A^{-p})^{-1/p}");
    neglim->add_option("--map", map_path, "map spec file")->required();
    neglim->add_option("--A", a_path, "positive semidefinite matrix file")->required();
    neglim->add_option("--epsilon-at", eps_at_p,
                       "also report the epsilon-regularized value at this p");
    add_common(neglim, opt);

    auto* sup = app.add_subcommand("sup", "spectral-order supremum");
    sup->add_option("--A", a_path)->required();
    sup->add_option("--B", b_path)->required();
    add_common(sup, opt);

    auto* inf = app.add_subcommand("inf", "spectral-order infimum");
    inf->add_option("--A", a_path)->required();
    inf->add_option("--B", b_path)->required();
    add_common(inf, opt);

    auto* mean = app.add_subcommand("mean", "operator mean A sigma B");
    mean->add_option("--mean", mean_text, "mean spec, name[:alpha]")->required();
    mean->add_option("--A", a_path)->required();
    mean->add_option("--B", b_path)->required();
    add_common(mean, opt);

    auto* meanlim = app.add_subcommand("mean-limit", "limit of (A^p #_alpha B)^{1/p}");
    meanlim->add_option("--A", a_path)->required();
    meanlim->add_option("--B", b_path)->required();
    meanlim->add_option("--alpha", opt.alpha, "geometric weight in [0,1]")->required();
    add_common(meanlim, opt);

    auto* renyi = app.add_subcommand("renyi", "Renyi divergences and their zero-order limits");
    renyi->add_option("--rho", rho_path)->required();
    renyi->add_option("--sigma", sigma_path)->required();
    renyi->add_option("--alpha", alpha_renyi, "divergence order (omit for limits only)");
    add_common(renyi, opt);

    auto* sweep = app.add_subcommand("sweep", "numeric p-sweep with convergence diagnostics");
    sweep->add_option("--map", map_path, "map spec file (map sweep)");
    sweep->add_option("--mean", mean_text, "mean spec (mean sweep)");
    sweep->add_flag("--sandwich", sweep_sandwich_mode, "(A^p B A^p)^{1/p} sweep");
    sweep->add_flag("--inf", sweep_inf_mode, "both-powered harmonic sweep");
    sweep->add_flag("--neg", sweep_neg, "inverse powers (with --map)");
    sweep->add_option("--A", a_path)->required();
    sweep->add_option("--B", b_path);
    sweep->add_option("--target", target_path, "closed-form target matrix file");
    sweep->add_flag("--serial", serial, "evaluate grid points serially");
    add_common(sweep, opt);

    app.add_subcommand("selftest", "run the embedded fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // flag/spec problems are input errors
    }

    try {
        if (app.got_subcommand("selftest")) return run_selftest();

        const Execution exec = serial ? Execution::serial : Execution::parallel;

        if (app.got_subcommand(limit)) {
            const Matrix k = io::load_matrix(k_path);
            const PSDMatrix a = io::load_psd(a_path);
            const auto r = congruence_limit(k, a, opt.tol_rank, opt.tol_group);
            std::string table = matrix_block("limit", r.limit.mat());
            table += "selected values:";
            for (double v : r.values) table += " " + std::to_string(v);
            table += "\n";
            emit(opt, io::congruence_result_to_json(r), table);
            return 0;
        }
        if (app.got_subcommand(maplim) || app.got_subcommand(neglim)) {
            const auto phi = io::load_map(map_path);
            const PSDMatrix a = io::load_psd(a_path);
            const bool neg = app.got_subcommand(neglim);
            const auto r = neg ? neg_map_limit(phi, a, opt.tol_rank, opt.tol_group)
                               : map_limit(phi, a, opt.tol_rank, opt.tol_group);
            io::json j = io::map_result_to_json(r);
            std::string table = matrix_block("limit", r.limit.mat());
            if (neg && eps_at_p >= 1.0) {
                const auto eps = epsilon_neg_limit(phi, a, eps_at_p);
                j["epsilon_regularized"] = io::matrix_to_json(eps.value.mat());
                j["epsilon_cauchy_delta"] = eps.cauchy_delta;
                table += matrix_block("epsilon-regularized value", eps.value.mat());
            }
            emit(opt, j, table);
            return 0;
        }
        if (app.got_subcommand(sup) || app.got_subcommand(inf)) {
            const PSDMatrix a = io::load_psd(a_path);
            const PSDMatrix b = io::load_psd(b_path);
            const PSDMatrix r = app.got_subcommand(sup)
                                    ? spectral_sup(a, b, opt.tol_rank, opt.tol_group)
                                    : spectral_inf(a, b, opt.tol_rank, opt.tol_group);
            io::json j;
            j["result"] = io::matrix_to_json(r.mat());
            emit(opt, j, matrix_block("result", r.mat()));
            return 0;
        }
        if (app.got_subcommand(mean)) {
            const auto spec = io::parse_mean(mean_text);
            const PSDMatrix a = io::load_psd(a_path);
            const PSDMatrix b = io::load_psd(b_path);
            const PSDMatrix r = mean_eval(spec, a, b);
            io::json j;
            j["result"] = io::matrix_to_json(r.mat());
            emit(opt, j, matrix_block("result", r.mat()));
            return 0;
        }
        if (app.got_subcommand(meanlim)) {
            const PSDMatrix a = io::load_psd(a_path);
            const PSDMatrix b = io::load_psd(b_path);
            const PSDMatrix r = geometric_limit(a, b, opt.alpha, opt.tol_rank, opt.tol_group);
            io::json j;
            j["result"] = io::matrix_to_json(r.mat());
            emit(opt, j, matrix_block("result", r.mat()));
            return 0;
        }
        if (app.got_subcommand(renyi)) {
            const DensityMatrix rho = DensityMatrix::from(io::load_psd(rho_path));
            const DensityMatrix sigma = DensityMatrix::from(io::load_psd(sigma_path));
            io::json j;
            std::string table;
            if (alpha_renyi > 0.0) {
                const auto d = renyi_divergences(rho, sigma, alpha_renyi);
                j["alpha"] = alpha_renyi;
                j["divergences"] = io::renyi_to_json(d);
                auto show = [](const ExtendedReal& v) {
                    return v.infinite ? std::string("inf") : std::to_string(v.value);
                };
                table += "D_alpha = " + show(d.d_alpha) + "\n";
                table += "D~_alpha = " + show(d.d_tilde_alpha) + "\n";
            }
            const auto z = zero_limits(rho, sigma, opt.tol_rank, opt.tol_group);
            j["zero_limits"] = io::zero_limits_to_json(z);
            auto show = [](const ExtendedReal& v) {
                return v.infinite ? std::string("inf") : std::to_string(v.value);
            };
            table += "D_0 = " + show(z.d0) + "\n";
            table += "D~_0 = " + show(z.d0_tilde) + "\n";
            table += "Q~_0 = " + std::to_string(z.q0_tilde) + "\n";
            table += std::string("commutes: ") + (z.commutes ? "yes" : "no") + "\n";
            emit(opt, j, table);
            return 0;
        }
        if (app.got_subcommand(sweep)) {
            const PSDMatrix a = io::load_psd(a_path);
            std::optional<HermitianMatrix> target;
            if (!target_path.empty())
                target = HermitianMatrix::from(io::load_matrix(target_path));
            const auto grid = default_grid(opt.p_max);
            ConvergenceReport rep;
            if (!map_path.empty()) {
                const auto phi = io::load_map(map_path);
                rep = sweep_neg ? sweep_neg_map(phi, a, grid, target, exec)
                                : sweep_map(phi, a, grid, target, exec);
            } else if (!mean_text.empty()) {
                if (b_path.empty()) throw InputError("mean sweep needs --B");
                rep = sweep_mean(io::parse_mean(mean_text), a, io::load_psd(b_path), grid,
                                 target, exec);
            } else if (sweep_sandwich_mode) {
                if (b_path.empty()) throw InputError("sandwich sweep needs --B");
                rep = sweep_sandwich(a, io::load_psd(b_path), grid, exec);
            } else if (sweep_inf_mode) {
                if (b_path.empty()) throw InputError("infimum sweep needs --B");
                rep = sweep_inf(a, io::load_psd(b_path), grid, target, exec);
            } else {
                throw InputError("sweep needs one of --map, --mean, --sandwich, --inf");
            }
            std::string table;
            for (std::size_t i = 0; i < rep.p_grid.size(); ++i) {
                table += "p = " + std::to_string(rep.p_grid[i]);
                if (!rep.errors.empty()) table += "  error = " + std::to_string(rep.errors[i]);
                table += "  eigenvalues:";
                for (double v : rep.eigenvalue_tracks[i]) table += " " + std::to_string(v);
                table += "\n";
            }
            table += "monotone: " + to_string(rep.monotone_flag) +
                     "  max violation: " + std::to_string(rep.max_violation) +
                     "  cauchy delta: " + std::to_string(rep.cauchy_delta) + "\n";
            emit(opt, io::report_to_json(rep), table);
            return 0;
        }
        throw InputError("no subcommand dispatched");
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
