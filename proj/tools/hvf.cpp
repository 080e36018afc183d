// hvf: analysis and verification tool for homogeneous vector-field systems.
//
// Subcommands: analyze, lift, distance, gamma, verify, potential. Inputs are
// .hvf system files; outputs are JSON and CSV (plot-ready, data only).
// Exit codes: 0 success, 1 validation failure, 2 numeric failure, 3 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hvf/estimates.hpp"
#include "hvf/gamma.hpp"
#include "hvf/lie.hpp"
#include "hvf/lifting.hpp"
#include "hvf/potential.hpp"
#include "hvf/system.hpp"
#include "hvf/volume.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_point(const std::string& s, int n) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if ((int)out.size() != n)
        throw CLI::ValidationError("point", "expected " + std::to_string(n) +
                                                " comma-separated coordinates");
    return out;
}

void emit(const json& j, const std::string& outdir, const std::string& name) {
    std::cout << j.dump(2) << "\n";
    if (!outdir.empty()) {
        fs::create_directories(outdir);
        std::ofstream f(fs::path(outdir) / name);
        f << j.dump(2) << "\n";
    }
}

void emit_csv(const std::string& text, const std::string& outdir, const std::string& name) {
    if (outdir.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(outdir);
        std::ofstream f(fs::path(outdir) / name);
        f << text;
    }
}

json report_json(const hvf::EstimateReport& rep) {
    json j;
    j["experiment"] = rep.experiment;
    j["constants"] = rep.constants;
    j["worst_ratio"] = rep.worst_ratio;
    j["sample"] = rep.sample;
    j["pass"] = rep.pass;
    j["gates"] = rep.notes;
    return j;
}

hvf::SystemSpec load_validated(const std::string& path) {
    auto spec = hvf::parse_system(read_file(path));
    auto rep = hvf::validate_homogeneity(spec);
    if (!rep.ok) {
        std::string msg = "system fails homogeneity validation:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw hvf::UnsupportedSystem(msg);
    }
    return spec;
}

hvf::GammaGrushin make_gamma(const hvf::SystemSpec& spec) {
    hvf::GammaGrushin G(spec);
    G.calibrate();
    return G;
}

int run(int argc, char** argv) {
    CLI::App app{"homogeneous vector-field systems: structure, lifting, "
                 "fundamental-solution numerics"};
    app.require_subcommand(1);
    std::string outdir;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "structure report (JSON)");
    std::string an_file;
    bool an_volume = false;
    analyze->add_option("file", an_file)->required();
    analyze->add_option("--out", outdir, "output directory for JSON/CSV artifacts");
    analyze->add_flag("--volume", an_volume, "include the f_k volume table");

    // lift
    auto* lift = app.add_subcommand("lift", "Carnot group lift (text + JSON)");
    std::string lf_file;
    lift->add_option("file", lf_file)->required();
    lift->add_option("--out", outdir, "output directory for JSON/CSV artifacts");

    // distance
    auto* dist = app.add_subcommand("distance", "CC-distance upper bound");
    std::string d_file, d_from, d_to;
    std::uint64_t d_seed = 1;
    int d_segments = 16;
    dist->add_option("file", d_file)->required();
    dist->add_option("--out", outdir, "output directory for JSON/CSV artifacts");
    dist->add_option("--from", d_from)->required();
    dist->add_option("--to", d_to)->required();
    dist->add_option("--seed", d_seed);
    dist->add_option("--segments", d_segments);
    bool d_drift = false;
    dist->add_flag("--drift", d_drift, "optimize drift controls (|a0| <= r^2)");

    // gamma
    auto* gam = app.add_subcommand("gamma", "fundamental solution evaluation");
    std::string g_file, g_pole, g_grid;
    bool g_calibrate = false;
    double g_tol = 1e-10;
    gam->add_option("file", g_file)->required();
    gam->add_option("--out", outdir, "output directory for JSON/CSV artifacts");
    gam->add_flag("--calibrate", g_calibrate, "print gamma0 and residuals");
    gam->add_option("--pole", g_pole, "pole x1,x2 for the CSV grid");
    gam->add_option("--grid", g_grid, "y1min:y1max:n1,y2min:y2max:n2");
    gam->add_option("--tol", g_tol, "saturation quadrature tolerance");

    // verify
    auto* ver = app.add_subcommand("verify", "estimate verification suites");
    std::string v_file, v_suite, v_pole = "1,0";
    std::uint64_t v_seed = 0;
    int v_pairs = 1500;
    ver->add_option("file", v_file)->required();
    ver->add_option("--out", outdir, "output directory for JSON/CSV artifacts");
    ver->add_option("--suite", v_suite, "upper|lower|pole|deriv|kernel")->required();
    ver->add_option("--seed", v_seed, "RNG seed (required for reproducibility)")
        ->required();
    ver->add_option("--pairs", v_pairs);
    ver->add_option("--pole", v_pole, "pole for the pole/kernel suites");

    // potential
    auto* pot = app.add_subcommand("potential", "mean-value operators");
    std::string p_file, p_pole, p_levels, p_funcs = "one,y1,y2,y1y2,y1sq,y2sq";
    double p_alpha = 3.0;
    pot->add_option("file", p_file)->required();
    pot->add_option("--out", outdir, "output directory for JSON/CSV artifacts");
    pot->add_option("--pole", p_pole)->required();
    pot->add_option("--levels", p_levels)->required();
    pot->add_option("--funcs", p_funcs);
    pot->add_option("--alpha", p_alpha);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;  // usage error
    }

    if (*analyze) {
        auto spec = hvf::parse_system(read_file(an_file));
        auto hom = hvf::validate_homogeneity(spec);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["system"] = {{"n", spec.n},
                       {"m", spec.m()},
                       {"weights", spec.sigma},
                       {"q", spec.q()},
                       {"drift", spec.drift.has_value()},
                       {"canonical", hvf::print_system(spec)}};
        json hj;
        hj["ok"] = hom.ok;
        hj["independent"] = hom.independent;
        hj["violations"] = hom.violations;
        for (std::size_t i = 0; i < hom.field_degrees.size(); ++i)
            hj["field_degrees"].push_back(
                hom.field_degrees[i] ? json(*hom.field_degrees[i]) : json(nullptr));
        j["homogeneity"] = hj;
        if (!hom.ok) {
            emit(j, outdir, "analyze.json");
            return 1;
        }
        auto basis = hvf::lie_basis(spec);
        json bj;
        bj["N"] = basis.N;
        bj["step"] = basis.step;
        bj["q"] = basis.q;
        bj["p"] = basis.p;
        for (const auto& el : basis.elements) {
            json ej;
            ej["multi_index"] = el.index.entries;
            ej["weight"] = el.weight;
            std::vector<std::string> coeffs;
            for (const auto& c : el.field.coeffs) coeffs.push_back(c.str());
            ej["field"] = coeffs;
            bj["basis"].push_back(ej);
        }
        j["lie"] = bj;
        std::vector<hvf::Rational> zero(spec.n, hvf::Rational(0));
        j["hormander_rank_at_0"] = hvf::hormander_rank(basis, zero);
        if (an_volume) {
            auto prof = hvf::build_profile(spec);
            json vj;
            vj["q"] = prof.q;
            for (const auto& [k, dets] : prof.dets) {
                json kj;
                kj["weight"] = k;
                for (const auto& d : dets) kj["determinants"].push_back(d.str());
                kj["f_at_(1,...,1)"] = prof.f(k, std::vector<double>(spec.n, 1.0));
                vj["f"].push_back(kj);
            }
            vj["f_q_constant"] = prof.f_q_constant().str();
            j["volume"] = vj;
            // CSV sample of Lambda along a ray
            std::ostringstream csv;
            csv << "rho,lambda_at_e1\n";
            std::vector<double> e1(spec.n, 0.0);
            e1[0] = 1.0;
            for (double rho = 0.125; rho <= 4.0; rho *= 2.0)
                csv << rho << "," << prof.lambda(e1, rho) << "\n";
            emit_csv(csv.str(), outdir, "volume.csv");
        }
        emit(j, outdir, "analyze.json");
        return 0;
    }

    if (*lift) {
        auto spec = load_validated(lf_file);
        auto L = hvf::build_lift(spec);
        auto checks = hvf::verify_lift(L);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["N"] = L.N;
        j["p"] = L.p;
        j["q"] = L.q;
        j["Q"] = L.Q;
        j["tau"] = L.tau;
        std::vector<std::string> prod, inv;
        for (const auto& f : L.product) prod.push_back(f.str());
        for (const auto& f : L.inverse) inv.push_back(f.str());
        j["group_law"] = prod;
        j["inversion"] = inv;
        for (std::size_t i = 0; i < L.lifted.size(); ++i) {
            std::vector<std::string> coeffs;
            for (const auto& c : L.lifted[i].coeffs) coeffs.push_back(c.str());
            j["lifted_fields"].push_back(coeffs);
        }
        if (L.lifted_drift) {
            std::vector<std::string> coeffs;
            for (const auto& c : L.lifted_drift->coeffs) coeffs.push_back(c.str());
            j["lifted_drift"] = coeffs;
        }
        j["checks"] = {{"associative", checks.associative},
                       {"dilation_compatible", checks.dilation_compatible},
                       {"left_translation_unimodular", checks.left_translation_unimodular},
                       {"theta_projects_to_y", checks.theta_projects_to_y},
                       {"change_of_variable_identity", checks.stefanoid},
                       {"phi_jacobian_unimodular", checks.phi_jacobian_unimodular}};
        bool all = checks.associative && checks.dilation_compatible &&
                   checks.left_translation_unimodular && checks.theta_projects_to_y &&
                   checks.stefanoid && checks.phi_jacobian_unimodular;
        emit(j, outdir, "lift.json");
        return all ? 0 : 2;
    }

    if (*dist) {
        auto spec = load_validated(d_file);
        auto from = parse_point(d_from, spec.n);
        auto to = parse_point(d_to, spec.n);
        hvf::DistanceOptions opts;
        opts.seed = d_seed;
        opts.segments = d_segments;
        opts.use_drift = d_drift;
        auto res = hvf::distance_upper_bound(spec, from, to, opts);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["r_hat"] = res.r;
        j["endpoint_error"] = res.endpoint_error;
        j["feasible"] = res.feasible;
        std::ostringstream csv;
        csv << "segment";
        for (int k = 0; k < spec.m(); ++k) csv << ",a" << (k + 1);
        csv << "\n";
        for (int s = 0; s < opts.segments; ++s) {
            csv << s;
            for (int k = 0; k < spec.m(); ++k)
                csv << "," << res.controls[s * spec.m() + k];
            csv << "\n";
        }
        emit(j, outdir, "distance.json");
        emit_csv(csv.str(), outdir, "controls.csv");
        return res.feasible ? 0 : 2;
    }

    if (*gam) {
        auto spec = load_validated(g_file);
        hvf::GammaGrushin G(spec);
        auto cal = G.calibrate();
        json j;
        j["schema_version"] = kSchemaVersion;
        j["gamma0"] = cal.gamma0;
        j["calibration"] = {{"cross_check_rel", cal.cross_check_rel},
                            {"recovered_rel_err", cal.recovered_rel_err}};
        if (g_calibrate || g_pole.empty()) {
            emit(j, outdir, "gamma.json");
            return cal.converged ? 0 : 2;
        }
        auto pole = parse_point(g_pole, 2);
        if (g_grid.empty())
            throw CLI::ValidationError("--grid", "required together with --pole");
        auto parse_axis = [](const std::string& s) {
            double a, b;
            int n;
            char c1, c2;
            std::istringstream ss(s);
            if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':')
                throw CLI::ValidationError("--grid", "expected min:max:count per axis");
            return std::tuple{a, b, n};
        };
        auto comma = g_grid.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--grid", "expected two comma-separated axes");
        auto [a1, b1, n1] = parse_axis(g_grid.substr(0, comma));
        auto [a2, b2, n2] = parse_axis(g_grid.substr(comma + 1));
        std::ostringstream csv;
        csv << "y1,y2,gamma,X1yGamma,X2yGamma\n";
        for (int i = 0; i < n1; ++i)
            for (int k = 0; k < n2; ++k) {
                double y1 = a1 + (n1 == 1 ? 0 : (b1 - a1) * i / (n1 - 1));
                double y2 = a2 + (n2 == 1 ? 0 : (b2 - a2) * k / (n2 - 1));
                std::vector<double> y = {y1, y2};
                if (y == pole) continue;
                auto g = G.grad_y(pole, y);
                csv << y1 << "," << y2 << "," << G.closed_form(pole, y) << "," << g[0]
                    << "," << y1 * g[1] << "\n";
            }
        emit(j, outdir, "gamma.json");
        emit_csv(csv.str(), outdir, "gamma_grid.csv");
        return 0;
    }

    if (*ver) {
        auto spec = load_validated(v_file);
        auto G = make_gamma(spec);
        auto prof = hvf::build_profile(spec);
        hvf::EstimatesVerifier V(G, prof);
        hvf::VerifierOptions opts;
        opts.seed = v_seed;
        opts.pairs = v_pairs;
        hvf::EstimateReport rep;
        std::ostringstream csv;
        if (v_suite == "upper" || v_suite == "lower") {
            rep = (v_suite == "upper") ? V.verify_upper_n2(opts) : V.verify_lower_n2(opts);
            // plot-ready sweep along a ray
            csv << "d,gamma,bound,ratio\n";
            std::vector<double> x = {1.0, 0.0};
            double R0 = rep.constants.count("R0") ? rep.constants.at("R0")
                                                  : rep.constants.at("R1");
            for (double d = 1e-3; d <= 1.0; d *= 1.3) {
                double t = hvf::surrogate_ray_radius(x, 0.7, d);
                std::vector<double> y = {x[0] + t * std::cos(0.7),
                                         x[1] + t * std::sin(0.7)};
                double gv = G.closed_form(x, y);
                double bound = (v_suite == "upper")
                                   ? d * d / prof.lambda(x, d) * std::log(R0 / d)
                                   : std::log(R0 / d);
                csv << d << "," << gv << "," << bound << "," << gv / bound << "\n";
            }
        } else if (v_suite == "pole") {
            rep = V.verify_fixed_pole(parse_point(v_pole, 2), opts);
        } else if (v_suite == "deriv") {
            rep = V.verify_derivative_bounds(1, opts);
            auto rep2 = V.verify_derivative_bounds(2, opts);
            rep.pass = rep.pass && rep2.pass;
            for (const auto& [k, v] : rep2.constants) rep.constants["r2_" + k] = v;
            for (const auto& n : rep2.notes) rep.notes.push_back("r2: " + n);
        } else if (v_suite == "kernel") {
            rep = V.singular_cancellation(parse_point(v_pole, 2), 1, 1, opts);
        } else {
            throw CLI::ValidationError("--suite", "unknown suite '" + v_suite + "'");
        }
        json j = report_json(rep);
        j["schema_version"] = kSchemaVersion;
        j["seed"] = v_seed;
        emit(j, outdir, "verify_" + v_suite + ".json");
        if (csv.tellp() > 0) emit_csv(csv.str(), outdir, "verify_" + v_suite + ".csv");
        return rep.pass ? 0 : 2;
    }

    if (*pot) {
        auto spec = load_validated(p_file);
        auto G = make_gamma(spec);
        hvf::PotentialTheory P(G, p_alpha);
        auto pole = parse_point(p_pole, 2);
        std::vector<double> levels;
        {
            std::istringstream ss(p_levels);
            std::string tok;
            while (std::getline(ss, tok, ',')) levels.push_back(std::stod(tok));
        }
        std::map<std::string, hvf::PotentialTheory::Fn> bank = {
            {"one", [](double, double) { return 1.0; }},
            {"y1", [](double a, double) { return a; }},
            {"y2", [](double, double b) { return b; }},
            {"y1y2", [](double a, double b) { return a * b; }},
            {"y1sq", [](double a, double) { return a * a; }},
            {"y2sq", [](double, double b) { return b * b; }},
        };
        std::vector<std::string> funcs;
        {
            std::istringstream ss(p_funcs);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!bank.count(tok))
                    throw CLI::ValidationError("--funcs", "unknown function '" + tok + "'");
                funcs.push_back(tok);
            }
        }
        std::ostringstream csv;
        csv << "r,func,u_at_pole,m_r,M_r,q_r,Q_r,omega_r\n";
        json j;
        j["schema_version"] = kSchemaVersion;
        j["alpha"] = p_alpha;
        j["gamma0"] = G.gamma0();
        for (double r : levels) {
            auto ls = P.extract_level_set(pole, r);
            auto def = P.deficit_functionals(pole, r);
            for (const auto& name : funcs) {
                double m = P.surface_mean(ls, bank.at(name));
                double M = P.M_r(pole, r, bank.at(name));
                csv << r << "," << name << "," << bank.at(name)(pole[0], pole[1]) << ","
                    << m << "," << M << "," << def.q_r << "," << def.Q_r << ","
                    << def.omega_r << "\n";
            }
            j["levels"].push_back({{"r", r},
                                   {"area", ls.area()},
                                   {"vertices", ls.polyline.size()},
                                   {"q_r", def.q_r},
                                   {"Q_r", def.Q_r},
                                   {"omega_r", def.omega_r}});
        }
        emit(j, outdir, "potential.json");
        emit_csv(csv.str(), outdir, "potential.csv");
        return 0;
    }

    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const hvf::ParseError& e) {
        json j = {{"schema_version", kSchemaVersion},
                  {"error", {{"kind", "parse"}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 1;
    } catch (const hvf::UnsupportedSystem& e) {
        json j = {{"schema_version", kSchemaVersion},
                  {"error", {{"kind", "unsupported_system"}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 1;
    } catch (const hvf::CalibrationError& e) {
        json j = {{"schema_version", kSchemaVersion},
                  {"error", {{"kind", "calibration"}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j = {{"schema_version", kSchemaVersion},
                  {"error", {{"kind", "numeric"}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 2;
    }
}
