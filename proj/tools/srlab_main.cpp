// Command-line front end: solve shortest horizontal paths, analyze the
// solved controls (moduli, primal/dual values, variations, spectra), and
// run the scripted experiment / verification pipelines.
//
// Exit codes: 0 success, 1 failed checks or a failed solve, 2 usage or
// config errors.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srlab/errors.hpp"
#include "srlab/interpdual.hpp"
#include "srlab/lab.hpp"
#include "srlab/numeric.hpp"
#include "srlab/regularity.hpp"
#include "srlab/shortest.hpp"
#include "srlab/spectral.hpp"
#include "srlab/structure.hpp"
#include "srlab/trajectory.hpp"
#include "srlab/variation.hpp"

namespace {

using namespace srlab;

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) x[static_cast<int>(i)] = v[i];
    return x;
}

srgeom::SRStructure resolve_structure(const std::string& name, const std::string& file) {
    return file.empty() ? srgeom::catalogue(name) : srgeom::load_structure(file);
}

std::string fd(double v) { return io::fmt_double(v); }

int cmd_solve(const std::string& name, const std::string& file,
              const std::vector<double>& from, const std::vector<double>& to, int grid,
              int restarts, std::uint64_t seed, const std::string& out) {
    srgeom::SRStructure s = resolve_structure(name, file);
    geodesics::SolveOptions opts;
    opts.grid = grid;
    opts.restarts = restarts;
    opts.seed = seed;
    geodesics::SolveResult r = geodesics::solve_shortest(s, to_vec(from), to_vec(to), opts);
    std::printf("structure        %s\n", s.name.c_str());
    std::printf("length           %s\n", fd(r.traj.length).c_str());
    std::printf("endpoint defect  %s\n", fd(r.endpoint_defect).c_str());
    std::printf("energy           %s\n", fd(r.energy).c_str());
    std::printf("status           %s\n",
                r.converged ? r.certificate.c_str() : "endpoint constraint not met");
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        geodesics::save_trajectory_json(r.traj, out + "/trajectory.json");
        geodesics::save_trajectory_text(r.traj, out + "/trajectory.txt");
        std::printf("wrote            %s/trajectory.{json,txt}\n", out.c_str());
    }
    return r.converged ? 0 : 1;
}

int cmd_regularity(const std::string& in, const std::vector<double>& p_list, double alpha,
                   const std::string& out) {
    geodesics::Trajectory t = geodesics::load_trajectory_json(in);
    regularity::SampledControl u = regularity::from_trajectory(t);
    regularity::RegularityReport rep = regularity::analyze(u, p_list, alpha);
    for (const auto& fr : rep.fits) {
        if (fr.exact_invariance)
            std::printf("p=%-4s modulus exponent: exact shift invariance\n", fd(fr.p).c_str());
        else
            std::printf("p=%-4s modulus exponent %-10s residual %s\n", fd(fr.p).c_str(),
                        fd(fr.alpha).c_str(), fd(fr.residual).c_str());
    }
    for (const auto& hr : rep.holder)
        std::printf("p=%-4s holder(alpha=%s) %-10s besov %s%s\n", fd(hr.p).c_str(),
                    fd(hr.alpha).c_str(), fd(hr.c).c_str(), fd(hr.besov).c_str(),
                    hr.at_grid_floor ? "  (grid floor)" : "");
    if (rep.poincare)
        std::printf("poincare ratio %s  identity residual %s\n", fd(rep.poincare->ratio).c_str(),
                    fd(rep.poincare->identity_residual).c_str());
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        io::CsvWriter csv(out + "/moduli.csv");
        csv.row({"p", "h", "omega"});
        for (const auto& tab : rep.moduli)
            for (size_t i = 0; i < tab.h.size(); ++i)
                csv.row({fd(tab.p), fd(tab.h[i]), fd(tab.omega[i])});
        std::printf("wrote %s/moduli.csv\n", out.c_str());
    }
    return 0;
}

int cmd_kfunc(const std::string& in, int component, const std::vector<double>& M_list,
              double q, double r, const std::string& out) {
    geodesics::Trajectory t = geodesics::load_trajectory_json(in);
    if (component < 1 || component > t.controls.rows())
        throw CLI::ValidationError("--component", "out of range for the trajectory");
    Eigen::VectorXd u1 = t.controls.row(component - 1).transpose();
    std::printf("%-10s %-14s %-14s %-14s %s\n", "M", "S", "K", "gap", "rel_gap");
    io::CsvWriter* csv = nullptr;
    std::unique_ptr<io::CsvWriter> holder;
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        holder = std::make_unique<io::CsvWriter>(out + "/gap.csv");
        csv = holder.get();
        csv->row({"M", "S", "K", "gap", "rel_gap"});
    }
    bool all_small = true;
    for (double M : M_list) {
        interpdual::DualPair dp = interpdual::duality_gap(u1, M, r, q);
        std::printf("%-10s %-14s %-14s %-14s %s\n", fd(M).c_str(), fd(dp.S_value).c_str(),
                    fd(dp.K_value).c_str(), fd(dp.gap).c_str(), fd(dp.rel_gap).c_str());
        if (csv)
            csv->row({fd(M), fd(dp.S_value), fd(dp.K_value), fd(dp.gap), fd(dp.rel_gap)});
        if (dp.rel_gap > 1e-2) all_small = false;
    }
    return all_small ? 0 : 1;
}

int cmd_variation(const std::string& in, const std::string& file, int component,
                  const std::string& family, double lam_lo, double lam_hi) {
    geodesics::Trajectory t = geodesics::load_trajectory_json(in);
    srgeom::SRStructure s = resolve_structure(t.structure, file);
    if (component < 1 || component > s.rank_k)
        throw CLI::ValidationError("--component", "out of range for the structure");
    const int c = component - 1;
    const int N = t.intervals();
    variation::TestFunction phi = family == "hat" ? variation::TestFunction::hat(N)
                                  : family == "sine"
                                      ? variation::TestFunction::sine(N, 1)
                                      : variation::TestFunction::random(N, 1);

    variation::FirstOrderCheck fc = variation::first_order_check(s, t, phi, lam_hi, c);
    std::printf("pointwise bound: max ratio %s  max excess %s  constant %s  %s\n",
                fd(fc.max_ratio).c_str(), fd(fc.max_excess).c_str(), fd(fc.constant).c_str(),
                fc.holds ? "holds" : "VIOLATED");

    std::vector<double> lams = variation::lambda_grid(lam_lo, lam_hi);
    try {
        variation::OrderFit of = variation::endpoint_order(s, t, phi, c, lams);
        std::printf("deviation order (raw profile)       %s\n", fd(of.slope).c_str());
    } catch (const insufficient_data& e) {
        std::printf("deviation order (raw profile)       n/a: %s\n", e.what());
    }
    variation::ProjectionResult pr = variation::project_to_H(s, t, phi, c);
    if (pr.degenerate) {
        std::printf("projection: all moment rows vanish; profile unchanged\n");
    } else {
        std::printf("projection: rank %d  residual %s\n", pr.active_constraints,
                    fd(pr.residual).c_str());
    }
    try {
        variation::OrderFit of = variation::endpoint_order(s, t, pr.projected, c, lams);
        std::printf("deviation order (projected profile) %s\n", fd(of.slope).c_str());
    } catch (const insufficient_data& e) {
        std::printf("deviation order (projected profile) n/a: %s\n", e.what());
    }
    return fc.holds ? 0 : 1;
}

int cmd_fourier(const std::string& in, int max_mode, const std::vector<double>& alphas,
                const std::vector<double>& gammas, const std::string& out) {
    geodesics::Trajectory t = geodesics::load_trajectory_json(in);
    regularity::SampledControl u = regularity::from_trajectory(t);
    int cap = u.samples() / 2 - 1;
    int mm = max_mode > 0 ? std::min(max_mode, cap) : cap;
    spectral::FourierTable table = spectral::fourier_coeffs(u, mm);

    double energy = u.values.squaredNorm() * u.dt();
    std::printf("modes stored     0..%d\n", table.max_mode);
    std::printf("spectrum mass    %s  control energy %s\n", fd(table.total_power()).c_str(),
                fd(energy).c_str());
    for (double a : alphas) {
        spectral::WeightedSumReport ws = spectral::weighted_sum(table, a);
        std::printf("weighted sum a=%-6s value %-12s last ratio %-8s %s\n", fd(a).c_str(),
                    fd(ws.value).c_str(), fd(ws.last_ratio).c_str(),
                    ws.converging ? "converging" : "diverging");
    }
    for (double g : gammas) {
        spectral::EllGammaReport eg = spectral::ell_gamma_norm(table, g);
        std::printf("coefficient norm gamma=%-6s value %-12s last ratio %-8s %s\n",
                    fd(g).c_str(), fd(eg.value).c_str(), fd(eg.last_ratio).c_str(),
                    eg.converging ? "converging" : "diverging");
    }
    std::vector<int> Ms;
    for (int M = 4; M <= mm / 2; M *= 2) Ms.push_back(M);
    if (Ms.size() >= 3) {
        spectral::TruncationReport tr = spectral::partial_sum_error(table, Ms);
        if (tr.slope_valid)
            std::printf("truncation error slope %s\n", fd(tr.slope).c_str());
        else
            std::printf("truncation error slope n/a (errors at the roundoff floor)\n");
    }
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        io::CsvWriter csv(out + "/fourier.csv");
        std::vector<std::string> head{"m"};
        for (int c = 0; c < table.coeff.rows(); ++c) {
            head.push_back("re_" + std::to_string(c + 1));
            head.push_back("im_" + std::to_string(c + 1));
        }
        head.push_back("power");
        csv.row(head);
        for (int m = 0; m <= table.max_mode; ++m) {
            std::vector<std::string> cells{std::to_string(m)};
            for (int c = 0; c < table.coeff.rows(); ++c) {
                cells.push_back(fd(table.coeff(c, m).real()));
                cells.push_back(fd(table.coeff(c, m).imag()));
            }
            cells.push_back(fd(table.power(m)));
            csv.row(cells);
        }
        std::printf("wrote %s/fourier.csv\n", out.c_str());
    }
    return 0;
}

int cmd_ballbox(const std::string& name, const std::string& file,
                const std::vector<double>& point, const std::vector<double>& dir,
                const std::vector<double>& radii, int grid, int restarts,
                std::uint64_t seed) {
    srgeom::SRStructure s = resolve_structure(name, file);
    geodesics::BallBoxReport r =
        geodesics::ballbox_probe(s, to_vec(point), to_vec(dir), radii, grid, restarts, seed);
    std::printf("%-12s %-14s %s\n", "radius", "distance", "converged");
    for (const auto& pt : r.points)
        std::printf("%-12s %-14s %s\n", fd(pt.radius).c_str(), fd(pt.distance).c_str(),
                    pt.converged ? "yes" : "no");
    std::printf("exponent %s  (declared step %d admits [%s, 1])%s\n", fd(r.exponent).c_str(),
                s.declared_step, fd(1.0 / s.declared_step).c_str(),
                r.partial ? "  [some radii failed]" : "");
    std::printf("inclusion constants: horizontal %s  anisotropic %s\n",
                fd(r.cbb_horizontal).c_str(), fd(r.cbb_anisotropic).c_str());
    return r.exponent_in_range && !r.partial ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for shortest horizontal paths"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "shortest path between two points");
    std::string s_name = "heisenberg", s_file, s_out;
    std::vector<double> s_from, s_to;
    int s_grid = 256, s_restarts = 4;
    std::uint64_t s_seed = 1;
    solve->add_option("--structure", s_name, "catalogue structure name");
    solve->add_option("--structure-file", s_file, "structure definition file");
    solve->add_option("--from", s_from, "start point")->required()->expected(-1);
    solve->add_option("--to", s_to, "target point")->required()->expected(-1);
    solve->add_option("--grid", s_grid, "control intervals");
    solve->add_option("--restarts", s_restarts, "random restarts");
    solve->add_option("--seed", s_seed, "rng seed");
    solve->add_option("--out", s_out, "directory for trajectory files");

    // regularity
    auto* reg = app.add_subcommand("regularity", "difference moduli of a solved control");
    std::string r_in, r_out;
    std::vector<double> r_p{2.0};
    double r_alpha = 0.5;
    reg->add_option("--in", r_in, "trajectory.json")->required();
    reg->add_option("--p", r_p, "L_p indices")->expected(-1);
    reg->add_option("--alpha", r_alpha, "holder exponent");
    reg->add_option("--out", r_out, "directory for moduli.csv");

    // kfunc
    auto* kf = app.add_subcommand("kfunc", "primal/dual values and the gap");
    std::string k_in, k_out;
    int k_comp = 1;
    std::vector<double> k_M{0.25, 1.0, 4.0};
    double k_q = 2.0, k_r = 2.0;
    kf->add_option("--in", k_in, "trajectory.json")->required();
    kf->add_option("--component", k_comp, "control component (1-based)");
    kf->add_option("--M", k_M, "derivative budgets")->expected(-1);
    kf->add_option("--q", k_q, "derivative norm index (1 or 2)");
    kf->add_option("--r", k_r, "companion norm index (1 or 2)");
    kf->add_option("--out", k_out, "directory for gap.csv");

    // variation
    auto* var = app.add_subcommand("variation", "endpoint response to control variations");
    std::string v_in, v_file, v_family = "hat";
    int v_comp = 1;
    double v_lo = 1e-3, v_hi = 1e-1;
    var->add_option("--in", v_in, "trajectory.json")->required();
    var->add_option("--structure-file", v_file, "structure definition file");
    var->add_option("--component", v_comp, "varied component (1-based)");
    var->add_option("--family", v_family, "profile family: hat | sine | random");
    var->add_option("--lambda-lo", v_lo, "smallest amplitude");
    var->add_option("--lambda-hi", v_hi, "largest amplitude");

    // fourier
    auto* fo = app.add_subcommand("fourier", "spectral tables of a solved control");
    std::string f_in, f_out;
    int f_mm = 0;
    std::vector<double> f_alphas{0.4, 0.6}, f_gammas{1.0, 2.0};
    fo->add_option("--in", f_in, "trajectory.json")->required();
    fo->add_option("--max-mode", f_mm, "highest stored mode (default grid/2 - 1)");
    fo->add_option("--alpha", f_alphas, "weighted-sum exponents")->expected(-1);
    fo->add_option("--gamma", f_gammas, "coefficient norm indices")->expected(-1);
    fo->add_option("--out", f_out, "directory for fourier.csv");

    // ballbox
    auto* bb = app.add_subcommand("ballbox", "distance scaling along a direction");
    std::string b_name = "heisenberg", b_file;
    std::vector<double> b_point, b_dir, b_radii;
    int b_grid = 64, b_restarts = 5;
    std::uint64_t b_seed = 1;
    bb->add_option("--structure", b_name, "catalogue structure name");
    bb->add_option("--structure-file", b_file, "structure definition file");
    bb->add_option("--point", b_point, "base point")->required()->expected(-1);
    bb->add_option("--dir", b_dir, "probe direction")->required()->expected(-1);
    bb->add_option("--radii", b_radii, "probe radii")->required()->expected(-1);
    bb->add_option("--grid", b_grid, "control intervals per solve");
    bb->add_option("--restarts", b_restarts, "restarts per radius");
    bb->add_option("--seed", b_seed, "rng seed");

    // verify-all
    auto* ver = app.add_subcommand("verify-all", "run the complete verification suite");
    std::string ver_suite = "full", ver_out;
    std::uint64_t ver_seed = 1;
    ver->add_option("--suite", ver_suite, "smoke | full")
        ->check(CLI::IsMember({"smoke", "full"}));
    ver->add_option("--seed", ver_seed, "rng seed");
    ver->add_option("--out", ver_out, "directory for bundle.json");

    // run
    auto* run = app.add_subcommand("run", "scripted experiment from a config file");
    std::string run_cfg;
    run->add_option("--config", run_cfg, "key = value config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed())
            return cmd_solve(s_name, s_file, s_from, s_to, s_grid, s_restarts, s_seed, s_out);
        if (reg->parsed()) return cmd_regularity(r_in, r_p, r_alpha, r_out);
        if (kf->parsed()) return cmd_kfunc(k_in, k_comp, k_M, k_q, k_r, k_out);
        if (var->parsed()) return cmd_variation(v_in, v_file, v_comp, v_family, v_lo, v_hi);
        if (fo->parsed()) return cmd_fourier(f_in, f_mm, f_alphas, f_gammas, f_out);
        if (bb->parsed())
            return cmd_ballbox(b_name, b_file, b_point, b_dir, b_radii, b_grid, b_restarts,
                               b_seed);
        if (ver->parsed()) {
            lab::VerdictBundle b = lab::verify_all(
                ver_suite == "full" ? lab::Suite::full : lab::Suite::smoke, ver_seed, ver_out);
            std::fputs(lab::bundle_summary(b).c_str(), stdout);
            return b.all_pass() ? 0 : 1;
        }
        if (run->parsed()) {
            lab::ExperimentConfig cfg;
            try {
                cfg = lab::ExperimentConfig::from_file(run_cfg);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "config error: %s\n", e.what());
                return 2;
            }
            lab::VerdictBundle b = lab::run_experiment(cfg);
            std::fputs(lab::bundle_summary(b).c_str(), stdout);
            std::printf("artifacts under %s\n", cfg.out_dir.c_str());
            return b.all_pass() ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
