// Command-line driver: kernel checks, simulation, rate and metric evaluation,
// variational solvers, Monte Carlo estimates, and the verification suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "ldrw/acceptance.hpp"
#include "ldrw/decompose.hpp"
#include "ldrw/io.hpp"
#include "ldrw/mc.hpp"
#include "ldrw/rate.hpp"
#include "ldrw/testfn.hpp"
#include "ldrw/variational.hpp"
#include "ldrw/walk.hpp"

namespace {

using ldrw::load_json_file;
using nlohmann::json;

struct Output {
    std::string path;   // empty means stdout
    std::string format; // "json" or "csv"

    void emit(const json& j, const std::string& csv) const {
        std::string text = format == "json" ? j.dump(2) + "\n" : csv;
        if (path.empty())
            std::cout << text;
        else
            ldrw::write_text_file(path, text);
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ldrw::RateKernel require_kernel(const std::string& path) {
    if (path.empty()) throw std::invalid_argument("missing --kernel <file>");
    return ldrw::kernel_from_json(load_json_file(path));
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occupation-measure large deviations toolkit"};
    app.require_subcommand(1);

    std::string kernel_path, out_path, format = "csv";
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--kernel", kernel_path, "kernel JSON file");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.fallthrough();

    // check-kernel
    auto* cmd_check = app.add_subcommand("check-kernel", "report kernel assumptions");

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "sample one trajectory");
    double sim_t = 1.0;
    std::string sim_start;
    cmd_sim->add_option("--t", sim_t, "time horizon")->required();
    cmd_sim->add_option("--start", sim_start, "start site, comma separated (default origin)");

    // rate
    auto* cmd_rate = app.add_subcommand("rate", "rate function of a measure or compact point");
    std::string rate_measure, rate_xi;
    bool rate_ordered = false;
    std::int64_t rate_dual_radius = 0;
    int rate_dual_sweeps = 4;
    cmd_rate->add_option("--measure", rate_measure, "measure JSON file");
    cmd_rate->add_option("--xi", rate_xi, "compact point JSON file");
    cmd_rate->add_flag("--ordered-sum", rate_ordered,
                       "report the ordered-pair Dirichlet sum (twice the energy)");
    cmd_rate->add_option("--dual-radius", rate_dual_radius,
                         "also maximize the dual form on a box of this radius");
    cmd_rate->add_option("--dual-sweeps", rate_dual_sweeps, "coordinate sweeps per floor value");

    // metric
    auto* cmd_metric = app.add_subcommand("metric", "distance between two compact points");
    std::string metric_a, metric_b;
    int metric_level = 48;
    cmd_metric->add_option("--a", metric_a, "compact point JSON")->required();
    cmd_metric->add_option("--b", metric_b, "compact point JSON")->required();
    cmd_metric->add_option("--level", metric_level, "series truncation level");

    // decompose
    auto* cmd_dec = app.add_subcommand("decompose", "cluster decomposition and embedding");
    std::string dec_measure;
    std::int64_t dec_link = 5;
    double dec_floor = 0.01;
    bool dec_keep_residual = false;
    cmd_dec->add_option("--measure", dec_measure, "measure JSON file")->required();
    cmd_dec->add_option("--link-radius", dec_link, "l1 linking radius");
    cmd_dec->add_option("--mass-floor", dec_floor, "minimum piece mass");
    cmd_dec->add_flag("--keep-residual", dec_keep_residual, "include the residual measure");

    // opt-linear
    auto* cmd_lin = app.add_subcommand("opt-linear", "site-potential tilt via eigensolver");
    std::string lin_potential;
    std::int64_t lin_radius = 60;
    bool lin_gradient = false;
    int lin_starts = 8;
    cmd_lin->add_option("--site-potential", lin_potential, "site potential JSON")->required();
    cmd_lin->add_option("--radius", lin_radius, "box radius");
    cmd_lin->add_flag("--gradient", lin_gradient, "use projected gradient instead");
    cmd_lin->add_option("--starts", lin_starts, "random restarts (gradient mode)");

    // opt-quadratic
    auto* cmd_quad = app.add_subcommand("opt-quadratic", "pair-potential tilt maximization");
    std::string quad_potential;
    std::int64_t quad_radius = 40;
    int quad_starts = 16;
    cmd_quad->add_option("--potential", quad_potential, "difference potential JSON")->required();
    cmd_quad->add_option("--radius", quad_radius, "box radius");
    cmd_quad->add_option("--starts", quad_starts, "random restarts");

    // ilt-curve
    auto* cmd_curve = app.add_subcommand("ilt-curve", "intersection local time rate curve");
    std::int64_t curve_radius = 60;
    std::string curve_thetas;
    cmd_curve->add_option("--radius", curve_radius, "box radius");
    cmd_curve->add_option("--thetas", curve_thetas, "comma-separated multipliers");

    // mc-zt
    auto* cmd_zt = app.add_subcommand("mc-zt", "Monte Carlo log partition estimate");
    std::string zt_potential;
    double zt_t = 8.0;
    int zt_samples = 100000;
    cmd_zt->add_option("--potential", zt_potential, "difference potential JSON")->required();
    cmd_zt->add_option("--t", zt_t, "time horizon");
    cmd_zt->add_option("--samples", zt_samples, "sample count");

    // mc-ball
    auto* cmd_ball = app.add_subcommand("mc-ball", "metric-ball hitting decay rates");
    std::string ball_xi, ball_grid = "2,4,6";
    double ball_delta = 0.05;
    int ball_samples = 10000;
    cmd_ball->add_option("--xi", ball_xi, "target compact point JSON")->required();
    cmd_ball->add_option("--delta", ball_delta, "ball radius");
    cmd_ball->add_option("--t-grid", ball_grid, "comma-separated horizons");
    cmd_ball->add_option("--samples", ball_samples, "samples per horizon");

    // mc-stay
    auto* cmd_stay = app.add_subcommand("mc-stay", "no-jump probability check");
    double stay_t = 1.0;
    int stay_samples = 100000;
    cmd_stay->add_option("--t", stay_t, "time horizon");
    cmd_stay->add_option("--samples", stay_samples, "sample count");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the full verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Output out{out_path, format};
    try {
        if (*cmd_check) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::AssumptionReport rep = ldrw::check_assumptions(kernel);
            json j{{"total_rate", rep.total_rate},
                   {"irreducible", rep.irreducible},
                   {"symmetric", rep.symmetric},
                   {"bounded_translation_invariant", rep.bounded_translation_invariant},
                   {"confinement_bound", rep.confinement_bound},
                   {"chernoff_exponent_per_t",
                    {{"t=1", rep.chernoff_exponent_per_t[0]},
                     {"t=10", rep.chernoff_exponent_per_t[1]},
                     {"t=100", rep.chernoff_exponent_per_t[2]}}}};
            std::string csv = "total_rate,irreducible,symmetric,chernoff_t1,chernoff_t10,chernoff_t100\n" +
                              fmt(rep.total_rate) + "," + (rep.irreducible ? "1" : "0") + "," +
                              (rep.symmetric ? "1" : "0") + "," + fmt(rep.chernoff_exponent_per_t[0]) +
                              "," + fmt(rep.chernoff_exponent_per_t[1]) + "," +
                              fmt(rep.chernoff_exponent_per_t[2]) + "\n";
            out.emit(j, csv);
        } else if (*cmd_sim) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::LatticePoint start = ldrw::origin(kernel.dim());
            if (!sim_start.empty()) {
                start.clear();
                for (double c : parse_grid(sim_start)) start.push_back(std::int64_t(c));
            }
            ldrw::Trajectory traj = ldrw::simulate(kernel, sim_t, start, seed);
            json j = ldrw::to_json(traj);
            std::string csv = "jumps,max_displacement\n" + std::to_string(traj.jump_times.size()) +
                              "," + fmt(ldrw::max_displacement(traj)) + "\n";
            out.emit(j, csv);
        } else if (*cmd_rate) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            json j;
            double value = 0;
            if (!rate_measure.empty()) {
                ldrw::SparseMeasure mu = ldrw::measure_from_json(load_json_file(rate_measure));
                value = rate_ordered ? ldrw::dirichlet_sum_ordered(kernel, mu)
                                     : ldrw::dirichlet_energy(kernel, mu);
                j["rate"] = value;
                if (rate_dual_radius > 0) {
                    ldrw::DualBound dual =
                        ldrw::dual_lower_bound(kernel, mu, rate_dual_radius, rate_dual_sweeps);
                    j["dual_lower_bound"] = dual.value;
                    j["dual_gap"] = dual.gap;
                }
            } else if (!rate_xi.empty()) {
                ldrw::CompactPoint xi = ldrw::compact_point_from_json(load_json_file(rate_xi));
                value = ldrw::dirichlet_energy(kernel, xi);
                j["rate"] = value;
            } else {
                throw std::invalid_argument("rate: need --measure or --xi");
            }
            out.emit(j, fmt(value) + "\n");
        } else if (*cmd_metric) {
            ldrw::CompactPoint a = ldrw::compact_point_from_json(load_json_file(metric_a));
            ldrw::CompactPoint b = ldrw::compact_point_from_json(load_json_file(metric_b));
            ldrw::MetricResult r = ldrw::compact_distance(a, b, metric_level);
            json j{{"value", r.value}, {"truncation_error", r.truncation_error}};
            out.emit(j, fmt(r.value) + "\n");
        } else if (*cmd_dec) {
            ldrw::SparseMeasure mu = ldrw::measure_from_json(load_json_file(dec_measure));
            ldrw::Decomposition dec = ldrw::cluster_decompose(mu, dec_link, dec_floor);
            ldrw::CompactPoint xi = ldrw::embed(mu, dec_link, dec_floor);
            json j{{"xi", ldrw::to_json(xi)},
                   {"piece_count", dec.pieces.size()},
                   {"residual_mass", dec.residual.mass()}};
            if (dec_keep_residual) j["residual"] = ldrw::to_json(dec.residual);
            std::string csv = "pieces,residual_mass\n" + std::to_string(dec.pieces.size()) + "," +
                              fmt(dec.residual.mass()) + "\n";
            out.emit(j, csv);
        } else if (*cmd_lin) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            auto [dim, pot] = ldrw::site_function_from_json(load_json_file(lin_potential));
            if (dim != kernel.dim()) throw std::invalid_argument("opt-linear: dimension mismatch");
            ldrw::VariationalSolution sol =
                lin_gradient
                    ? ldrw::solve_linear_tilt_gradient(kernel, pot, lin_radius, lin_starts, seed,
                                                       threads)
                    : ldrw::solve_linear_tilt(kernel, pot, lin_radius);
            if (sol.boundary_mass > 1e-6)
                std::cerr << "warning: boundary mass " << sol.boundary_mass
                          << " exceeds 1e-6; enlarge --radius\n";
            json j{{"lambda", sol.value},
                   {"mass", sol.maximizer.mass()},
                   {"grad_norm", sol.gradient_norm},
                   {"boundary_mass", sol.boundary_mass},
                   {"starts", sol.starts_used},
                   {"maximizer", ldrw::to_json(sol.maximizer)}};
            out.emit(j, fmt(sol.value) + "\n");
        } else if (*cmd_quad) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::DifferencePotential v =
                ldrw::potential_from_json(load_json_file(quad_potential));
            ldrw::VariationalSolution sol =
                ldrw::solve_quadratic_tilt(kernel, v, quad_radius, quad_starts, seed, threads);
            if (sol.boundary_mass > 1e-6)
                std::cerr << "warning: boundary mass " << sol.boundary_mass
                          << " exceeds 1e-6; enlarge --radius\n";
            ldrw::MaximizerReport rep = ldrw::check_maximizer_properties(kernel, v, sol.maximizer);
            json j{{"v0", v.peak()},
                   {"lambda", sol.value},
                   {"mass", sol.maximizer.mass()},
                   {"grad_norm", sol.gradient_norm},
                   {"starts", sol.starts_used},
                   {"converged", sol.converged},
                   {"single_piece", rep.single_piece},
                   {"maximizer", ldrw::to_json(sol.maximizer)}};
            std::string csv = "v,lambda,mass,grad_norm,starts\n" + fmt(v.peak()) + "," +
                              fmt(sol.value) + "," + fmt(sol.maximizer.mass()) + "," +
                              fmt(sol.gradient_norm) + "," + std::to_string(sol.starts_used) + "\n";
            out.emit(j, csv);
        } else if (*cmd_curve) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            std::vector<double> thetas;
            if (curve_thetas.empty()) {
                thetas.push_back(0.0);
                for (int j2 = 0; j2 < 19; ++j2)
                    thetas.push_back(0.5 * std::pow(4e6 / 0.5, double(j2) / 18.0));
            } else {
                thetas = parse_grid(curve_thetas);
            }
            auto curve = ldrw::intersection_rate_curve(kernel, thetas, curve_radius, threads);
            json rows = json::array();
            std::string csv = "theta,y,I_prime\n";
            for (const auto& pt : curve) {
                rows.push_back({{"theta", pt.theta}, {"y", pt.y}, {"I_prime", pt.rate}});
                csv += fmt(pt.theta) + "," + fmt(pt.y) + "," + fmt(pt.rate) + "\n";
            }
            out.emit(rows, csv);
        } else if (*cmd_zt) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::DifferencePotential v = ldrw::potential_from_json(load_json_file(zt_potential));
            ldrw::LogPartitionEstimate est =
                ldrw::estimate_log_partition(kernel, v, zt_t, zt_samples, seed, threads);
            if (est.heavy_tail)
                std::cerr << "warning: top sample dominates the average (heavy tail)\n";
            json j{{"t", zt_t},          {"estimate", est.estimate},
                   {"ci_low", est.ci_low}, {"ci_high", est.ci_high},
                   {"n", est.n_samples},  {"heavy_tail_flag", est.heavy_tail}};
            std::string csv = "t,estimate,ci_low,ci_high,n,heavy_tail_flag\n" + fmt(zt_t) + "," +
                              fmt(est.estimate) + "," + fmt(est.ci_low) + "," + fmt(est.ci_high) +
                              "," + std::to_string(est.n_samples) + "," +
                              (est.heavy_tail ? "1" : "0") + "\n";
            out.emit(j, csv);
        } else if (*cmd_ball) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::CompactPoint xi = ldrw::compact_point_from_json(load_json_file(ball_xi));
            auto rates = ldrw::ball_decay_rates(kernel, xi, ball_delta, parse_grid(ball_grid),
                                                ball_samples, seed, 5, 0.01, 48, threads);
            json rows = json::array();
            std::string csv = "t,rate,hits,n\n";
            for (const auto& pt : rates) {
                rows.push_back({{"t", pt.t}, {"rate", pt.rate}, {"hits", pt.hits}, {"n", pt.n_samples}});
                csv += fmt(pt.t) + "," + fmt(pt.rate) + "," + std::to_string(pt.hits) + "," +
                       std::to_string(pt.n_samples) + "\n";
            }
            out.emit(rows, csv);
        } else if (*cmd_stay) {
            ldrw::RateKernel kernel = require_kernel(kernel_path);
            ldrw::StayCheck chk = ldrw::stay_probability_check(kernel, stay_t, stay_samples, seed, threads);
            json j{{"t", stay_t},
                   {"empirical", chk.empirical},
                   {"exact", chk.exact},
                   {"sigma", chk.sigma},
                   {"within_4sigma", chk.within_4sigma},
                   {"n", chk.n_samples}};
            std::string csv = "t,empirical,exact,sigma,within_4sigma,n\n" + fmt(stay_t) + "," +
                              fmt(chk.empirical) + "," + fmt(chk.exact) + "," + fmt(chk.sigma) +
                              "," + (chk.within_4sigma ? "1" : "0") + "," +
                              std::to_string(chk.n_samples) + "\n";
            out.emit(j, csv);
        } else if (*cmd_verify) {
            auto results = ldrw::run_acceptance(&std::cout, threads);
            return ldrw::all_passed(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
