// Command-line front end: suite verification runs, one-off computations, and
// parameter sweeps. See README for the config file format and examples.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fraclab/harness.hpp"

using namespace fraclab;

namespace {

int env_threads() {
    const char* v = std::getenv("FRACLAB_THREADS");
    if (!v) return 1;
    int n = std::atoi(v);
    return n > 0 ? n : 1;
}

std::vector<double> parse_coords(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty() || out.size() > 3)
        throw CLI::ValidationError("set", "coordinate lists must have 1 to 3 entries");
    return out;
}

GeometricSet::Member parse_member(const std::string& spec, int& dim) {
    auto fail = [&]() -> GeometricSet::Member {
        throw CLI::ValidationError(
            "set", "expected ball@cx[,cy[,cz]]@r or box@lo..@hi.. (got '" + spec + "')");
    };
    auto at1 = spec.find('@');
    if (at1 == std::string::npos) return fail();
    auto at2 = spec.find('@', at1 + 1);
    if (at2 == std::string::npos) return fail();
    std::string kind = spec.substr(0, at1);
    std::string a = spec.substr(at1 + 1, at2 - at1 - 1);
    std::string b = spec.substr(at2 + 1);
    if (kind == "ball") {
        auto c = parse_coords(a);
        dim = int(c.size());
        Vec center{};
        for (std::size_t i = 0; i < c.size(); ++i) center[i] = c[i];
        return Ball{center, std::stod(b)};
    }
    if (kind == "box") {
        auto lo = parse_coords(a), hi = parse_coords(b);
        if (lo.size() != hi.size())
            throw CLI::ValidationError("set", "box lo/hi dimension mismatch");
        dim = int(lo.size());
        Vec vlo{}, vhi{};
        for (std::size_t i = 0; i < lo.size(); ++i) {
            vlo[i] = lo[i];
            vhi[i] = hi[i];
        }
        return AxisBox{vlo, vhi};
    }
    return fail();
}

GeometricSet parse_set(const std::string& spec) {
    int dim = 1;
    if (spec.rfind("union@", 0) == 0) {
        std::vector<GeometricSet::Member> members;
        std::stringstream ss(spec.substr(6));
        std::string item;
        while (std::getline(ss, item, '|')) members.push_back(parse_member(item, dim));
        return GeometricSet::disjoint_union(dim, std::move(members));
    }
    auto member = parse_member(spec, dim);
    std::vector<GeometricSet::Member> members{member};
    return GeometricSet::disjoint_union(dim, std::move(members));
}

Content parse_content(const std::string& s) {
    if (s == "lebesgue") return Content::lebesgue();
    if (s.rfind("radial:", 0) == 0) return Content::radial_weight(std::stod(s.substr(7)));
    throw CLI::ValidationError("content", "expected lebesgue or radial:<gamma>");
}

struct EntryOpts {
    std::string entry = "bump";
    int dim = 1;
    int resolution = 64;
};

void add_entry_opts(CLI::App* cmd, EntryOpts& e) {
    cmd->add_option("--entry", e.entry, "corpus entry name")->capture_default_str();
    cmd->add_option("--dim", e.dim, "grid dimension (1-3)")->capture_default_str();
    cmd->add_option("--resolution", e.resolution, "cells per unit length")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraclab: numerical laboratory for fractional smoothness inequalities"};
    app.require_subcommand(1);

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "run verification suites and emit a report");
    std::string config_path, out_path, format;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> threads_flag;
    bool timings = false;
    verify->add_option("--config", config_path, "config file (key = value lines)");
    verify->add_option("--out", out_path, "report output path");
    verify->add_option("--format", format, "json or csv");
    verify->add_option("--seed", seed_flag, "64-bit seed");
    verify->add_option("--threads", threads_flag, "worker threads (overrides FRACLAB_THREADS)");
    verify->add_flag("--timings", timings, "include wall-clock timings (breaks byte determinism)");

    // --- compute ---
    auto* compute = app.add_subcommand("compute", "one-off quantities");
    compute->require_subcommand(1);

    EntryOpts besov_e;
    double c_beta = 0.3, c_p = 1.0, c_q = 1.0;
    BesovQuadConfig quad;
    auto* c_besov = compute->add_subcommand("besov", "Besov seminorm of a corpus entry");
    add_entry_opts(c_besov, besov_e);
    c_besov->add_option("--beta", c_beta)->capture_default_str();
    c_besov->add_option("--p", c_p)->capture_default_str();
    c_besov->add_option("--q", c_q)->capture_default_str();
    c_besov->add_option("--radial-points", quad.radial_points, "0 = default");
    c_besov->add_option("--angular-points", quad.angular_points, "0 = default");
    c_besov->add_option("--r-min", quad.r_min, "0 = one grid spacing");
    c_besov->add_option("--r-max", quad.r_max, "0 = support diameter * (k+2)");

    EntryOpts lorentz_e;
    double c_p0 = 1.0, c_q0 = 1.0;
    bool weak = false;
    std::string content_spec = "lebesgue";
    auto* c_lorentz = compute->add_subcommand("lorentz", "Lorentz/weak norm of a corpus entry");
    add_entry_opts(c_lorentz, lorentz_e);
    c_lorentz->add_option("--p0", c_p0)->capture_default_str();
    c_lorentz->add_option("--q0", c_q0)->capture_default_str();
    c_lorentz->add_flag("--weak", weak, "weak norm (q0 = infinity)");
    c_lorentz->add_option("--content", content_spec, "lebesgue or radial:<gamma>")
        ->capture_default_str();

    std::string set_spec = "box@0@1";
    double pm_beta = 0.5, pm_p = 1.0, pm_q = 1.0;
    int pm_samples = 10000;
    std::uint64_t pm_seed = 1;
    std::string inner = "exact";
    auto* c_perim = compute->add_subcommand("perimeter", "fractional perimeter of a set");
    c_perim->add_option("--set", set_spec, "ball@c@r | box@lo@hi | union@m1|m2")
        ->capture_default_str();
    c_perim->add_option("--beta", pm_beta)->capture_default_str();
    c_perim->add_option("--p", pm_p)->capture_default_str();
    c_perim->add_option("--q", pm_q)->capture_default_str();
    c_perim->add_option("--samples", pm_samples)->capture_default_str();
    c_perim->add_option("--seed", pm_seed)->capture_default_str();
    c_perim->add_option("--inner", inner, "exact or mc")->capture_default_str();

    std::string cap_set = "box@0@1";
    double cap_beta = 0.3, cap_p = 1.0, cap_q = 1.0;
    std::vector<double> eps_grid;
    std::string optimizer = "grid";
    auto* c_cap = compute->add_subcommand("capacity", "variational capacity upper bound");
    c_cap->add_option("--set", cap_set)->capture_default_str();
    c_cap->add_option("--beta", cap_beta)->capture_default_str();
    c_cap->add_option("--p", cap_p)->capture_default_str();
    c_cap->add_option("--q", cap_q)->capture_default_str();
    c_cap->add_option("--eps", eps_grid, "decreasing mollification widths in (0,1)")
        ->delimiter(',');
    c_cap->add_option("--optimizer", optimizer, "grid or golden")->capture_default_str();

    EntryOpts re_e;
    auto* c_re = compute->add_subcommand("rearrange", "radial profile of the rearrangement");
    add_entry_opts(c_re, re_e);

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "CSV sweep of a quantity over a parameter");
    std::string sw_param = "beta", sw_quantity = "besov", sw_out;
    double sw_from = 0.2, sw_to = 0.8;
    int sw_steps = 7;
    EntryOpts sw_e;
    std::string sw_set = "box@0@1";
    double sw_beta = 0.3, sw_p = 1.0, sw_q = 1.0;
    std::uint64_t sw_seed = 1;
    sweep->add_option("--param", sw_param, "beta, p, or q")->capture_default_str();
    sweep->add_option("--from", sw_from)->required();
    sweep->add_option("--to", sw_to)->required();
    sweep->add_option("--steps", sw_steps)->required();
    sweep->add_option("--quantity", sw_quantity, "besov or perimeter")->capture_default_str();
    add_entry_opts(sweep, sw_e);
    sweep->add_option("--set", sw_set, "set for perimeter sweeps")->capture_default_str();
    sweep->add_option("--beta", sw_beta, "fixed beta when sweeping p or q")->capture_default_str();
    sweep->add_option("--p", sw_p)->capture_default_str();
    sweep->add_option("--q", sw_q)->capture_default_str();
    sweep->add_option("--seed", sw_seed)->capture_default_str();
    sweep->add_option("--out", sw_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            SuiteConfig cfg =
                config_path.empty() ? SuiteConfig::defaults() : parse_config_file(config_path);
            if (!out_path.empty()) cfg.out_path = out_path;
            if (!format.empty()) cfg.format = format;
            if (seed_flag) {
                cfg.seed = *seed_flag;
                cfg.corpus.seed = *seed_flag;
            }
            cfg.threads = threads_flag ? *threads_flag : std::max(cfg.threads, env_threads());
            auto reports = run_suite(cfg);
            emit_report(reports, cfg.format, cfg.out_path, &cfg, timings);
            std::size_t passed = 0;
            for (const auto& r : reports) passed += r.pass;
            std::printf("suites: %zu checks, %zu passed -> %s\n", reports.size(), passed,
                        cfg.out_path.c_str());
            return passed == reports.size() ? 0 : 1;
        }

        if (*c_besov) {
            auto f = make_corpus_entry(besov_e.entry, besov_e.dim, besov_e.resolution);
            auto params = BesovParams::create(c_beta, c_p, c_q, besov_e.dim);
            std::printf("besov_seminorm = %.12g\n", besov_seminorm(f, params, quad));
            return 0;
        }
        if (*c_lorentz) {
            auto f = make_corpus_entry(lorentz_e.entry, lorentz_e.dim, lorentz_e.resolution);
            Content nu = parse_content(content_spec);
            if (weak) {
                std::printf("weak_norm = %.12g\n", weak_norm(f, c_p0, nu));
            } else {
                auto part = LevelPartition::grid_values(f);
                std::printf("lorentz_norm = %.12g\n",
                            lorentz_norm(f, LorentzParams::create(c_p0, c_q0), nu, part));
            }
            return 0;
        }
        if (*c_perim) {
            auto e = parse_set(set_spec);
            auto params = BesovParams::create(pm_beta, pm_p, pm_q, e.dim());
            PerimeterMCConfig cfg;
            cfg.outer_samples = pm_samples;
            cfg.seed = pm_seed;
            cfg.threads = env_threads();
            if (inner == "mc")
                cfg.inner_scheme = PerimeterMCConfig::InnerScheme::MCImportance;
            auto res = fractional_perimeter(e, params, cfg);
            std::printf("fractional_perimeter = %.12g\nstd_error = %.3g\nsamples = %ld\n",
                        res.value, res.std_error, res.samples);
            return 0;
        }
        if (*c_cap) {
            auto e = parse_set(cap_set);
            auto params = BesovParams::create(cap_beta, cap_p, cap_q, e.dim());
            CapacityFamilyConfig fam;
            if (!eps_grid.empty()) fam.eps_grid = eps_grid;
            if (optimizer == "golden")
                fam.optimizer = CapacityFamilyConfig::Optimizer::GoldenSection;
            auto [value, eps] = besov_capacity_upper(e, params, fam);
            std::printf("capacity_upper = %.12g\nargmin_eps = %g\n", value, eps);
            return 0;
        }
        if (*c_re) {
            auto f = make_corpus_entry(re_e.entry, re_e.dim, re_e.resolution);
            auto prof = rearrange(f);
            std::printf("radius,value\n");
            for (std::size_t i = 0; i < prof.radii.size(); ++i)
                std::printf("%.12g,%.12g\n", prof.radii[i], prof.values[i]);
            return 0;
        }
        if (*sweep) {
            std::ostringstream csv;
            csv << sw_param << ",value,std_error\n";
            for (int i = 0; i < sw_steps; ++i) {
                double v = sw_steps == 1
                               ? sw_from
                               : sw_from + (sw_to - sw_from) * double(i) / (sw_steps - 1);
                double beta = sw_param == "beta" ? v : sw_beta;
                double p = sw_param == "p" ? v : sw_p;
                double q = sw_param == "q" ? v : sw_q;
                if (sw_quantity == "besov") {
                    auto f = make_corpus_entry(sw_e.entry, sw_e.dim, sw_e.resolution);
                    auto params = BesovParams::create(beta, p, q, sw_e.dim);
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.12g", besov_seminorm(f, params));
                    csv << v << ',' << buf << ",\n";
                } else if (sw_quantity == "perimeter") {
                    auto e = parse_set(sw_set);
                    auto params = BesovParams::create(beta, p, q, e.dim());
                    PerimeterMCConfig cfg;
                    cfg.seed = sw_seed;
                    cfg.threads = env_threads();
                    auto res = fractional_perimeter(e, params, cfg);
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), "%.12g,%.3g", res.value, res.std_error);
                    csv << v << ',' << buf << '\n';
                } else {
                    throw CLI::ValidationError("quantity", "expected besov or perimeter");
                }
            }
            if (sw_out.empty()) {
                std::fputs(csv.str().c_str(), stdout);
            } else {
                std::ofstream out(sw_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open '" + sw_out + "'");
                out << csv.str();
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
