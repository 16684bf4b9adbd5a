// Command-line front end: identity-suite runner, pointwise tensor
// evaluation, trajectory and residual-grid emission. All output is JSON or
// CSV with complex numbers serialized as [re, im] pairs; runs are
// deterministic given (model, samples, seed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kahlerc/eguchi.hpp"
#include "kahlerc/flows.hpp"
#include "kahlerc/quaternion.hpp"
#include "kahlerc/suite.hpp"

using namespace kahlerc;
using nlohmann::json;

namespace {

// parse one complex number: forms like 0.3, -0.2i, 0.3+0.1i, 1e-2-4e-3i
cplx parse_complex(const std::string& text) {
    std::string s;
    for (const char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw argument_error("empty complex literal");
    double re = 0, im = 0;
    std::size_t pos = 0;
    bool saw_any = false;
    while (pos < s.size()) {
        std::size_t end = pos + 1;  // keep a leading sign with the term
        while (end < s.size() && s[end] != '+' && s[end] != '-') {
            // signs inside exponents belong to the same term
            if ((s[end - 1] == 'e' || s[end - 1] == 'E')) ++end;
            ++end;
        }
        std::string term = s.substr(pos, end - pos);
        pos = end;
        bool imaginary = false;
        if (!term.empty() && (term.back() == 'i' || term.back() == 'I')) {
            imaginary = true;
            term.pop_back();
            if (term.empty() || term == "+") term = "1";
            if (term == "-") term = "-1";
        }
        try {
            const double v = std::stod(term);
            (imaginary ? im : re) += v;
            saw_any = true;
        } catch (const std::exception&) {
            throw argument_error("bad complex literal '" + text + "'");
        }
    }
    if (!saw_any) throw argument_error("bad complex literal '" + text + "'");
    return cplx(re, im);
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t semi = text.find(';', pos);
        const std::string part =
            text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        out.push_back(parse_complex(part));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

// `--at z,w` with ;-separated components per block
ChartPoint parse_point(const std::string& text, std::size_t n) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) throw argument_error("--at expects 'z,w'");
    const auto z = parse_complex_list(text.substr(0, comma));
    const auto w = parse_complex_list(text.substr(comma + 1));
    if (z.size() != n || w.size() != n)
        throw argument_error("--at: expected " + std::to_string(n) + " components per block");
    return ChartPoint(z, w);
}

json tensor_json(const TensorValue& t) {
    json valence = json::array();
    for (const Slot s : t.valence()) valence.push_back(s == Slot::Contra ? "contra" : "cov");

    std::function<json(std::size_t, std::vector<std::size_t>&)> emit =
        [&](std::size_t depth, std::vector<std::size_t>& idx) -> json {
        if (depth == t.rank()) return complex_json(t.at(idx));
        json arr = json::array();
        for (std::size_t i = 0; i < t.frame_dim(); ++i) {
            idx.push_back(i);
            arr.push_back(emit(depth + 1, idx));
            idx.pop_back();
        }
        return arr;
    };
    std::vector<std::size_t> idx;
    json frame = json::array();
    const std::size_t n = t.n();
    for (std::size_t j = 0; j < n; ++j) frame.push_back("dz" + std::to_string(j + 1));
    for (std::size_t j = 0; j < n; ++j) frame.push_back("dw" + std::to_string(j + 1));
    for (std::size_t j = 0; j < n; ++j) frame.push_back("dzbar" + std::to_string(j + 1));
    for (std::size_t j = 0; j < n; ++j) frame.push_back("dwbar" + std::to_string(j + 1));
    return json{{"valence", valence}, {"frame", frame}, {"coeffs", emit(0, idx)}};
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw argument_error("cannot open output file '" + out_path + "'");
        out << content;
    }
}

std::string csv_number(real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
    return buf;
}

std::string suite_csv(const SuiteReport& rep) {
    std::string csv = "name,anchor,defect,tolerance,op,pass,wall_ms\n";
    for (const auto& r : rep.checks.records) {
        std::string anchor = r.anchor;
        for (char& c : anchor)
            if (c == ',') c = ';';
        csv += r.name + "," + anchor + "," + csv_number(r.defect) + "," +
               csv_number(r.tolerance) + "," + (r.at_least ? ">=" : "<=") + "," +
               (r.pass ? "1" : "0") + "," + csv_number(real(r.wall_ms)) + "\n";
    }
    return csv;
}

int run_suite_command(const std::string& model, std::vector<std::string> suites,
                      std::size_t samples, std::uint64_t seed,
                      const std::vector<std::string>& tol_args, const std::string& emit,
                      const std::string& out_path) {
    SuiteConfig cfg;
    cfg.model = model;
    if (!suites.empty()) cfg.suites = std::move(suites);
    cfg.samples = samples;
    cfg.seed = seed;
    for (const auto& kv : tol_args) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw argument_error("--tol expects key=value");
        cfg.tol_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const SuiteReport rep = run_suite(cfg);
    if (emit == "json")
        write_output(out_path, to_json(rep).dump(2));
    else if (emit == "csv")
        write_output(out_path, suite_csv(rep));
    else
        throw argument_error("suite: --emit must be json or csv");
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complexified Kaehler geometry toolkit"};
    app.require_subcommand(1);

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "run identity suites and emit a JSON report");
    std::string suite_model = "cp1";
    std::vector<std::string> suite_suites;
    std::size_t suite_samples = 100;
    std::uint64_t suite_seed = 7;
    std::vector<std::string> suite_tols;
    std::string suite_out;
    std::string suite_emit = "json";
    suite_cmd->add_option("--model", suite_model, "model id: flatN|cp1|cpn:N|disk");
    suite_cmd->add_option("--suite", suite_suites,
                          "suite subset (bilag connection flows quaternion eguchi cotangent)");
    suite_cmd->add_option("--samples", suite_samples, "sample count per check");
    suite_cmd->add_option("--seed", suite_seed, "PRNG seed");
    suite_cmd->add_option("--tol", suite_tols, "tolerance override name=value");
    suite_cmd->add_option("--emit", suite_emit, "json|csv");
    suite_cmd->add_option("--out", suite_out, "output path (stdout if absent)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "print a bi-Lagrangian package tensor at a point");
    std::string eval_model = "cp1", eval_at = "0,0", eval_tensor = "omega", eval_out;
    eval_cmd->add_option("--model", eval_model, "model id");
    eval_cmd->add_option("--at", eval_at, "chart point z,w (components ;-separated)");
    eval_cmd->add_option("--tensor", eval_tensor,
                         "tensor name: omega|H|J|F|g|omega1|omega2|g1|g2");
    eval_cmd->add_option("--out", eval_out, "output path");

    // christoffel
    auto* chr_cmd = app.add_subcommand("christoffel", "print the Christoffel table at a point");
    std::string chr_model = "cp1", chr_at = "0,0", chr_out;
    chr_cmd->add_option("--model", chr_model, "model id");
    chr_cmd->add_option("--at", chr_at, "chart point z,w");
    chr_cmd->add_option("--out", chr_out, "output path");

    // geodesic
    auto* geo_cmd = app.add_subcommand("geodesic", "integrate a geodesic and emit CSV samples");
    std::string geo_model = "cp1", geo_start = "0,0", geo_vel = "0,1", geo_out;
    std::string geo_emit = "csv";
    double geo_t = 1.0;
    int geo_steps = kDefaultSteps;
    int geo_samples = 100;
    geo_cmd->add_option("--model", geo_model, "model id");
    geo_cmd->add_option("--start", geo_start, "initial point z,w");
    geo_cmd->add_option("--vel", geo_vel, "initial holomorphic velocity p,q");
    geo_cmd->add_option("--t", geo_t, "parameter length");
    geo_cmd->add_option("--steps", geo_steps, "integrator steps");
    geo_cmd->add_option("--samples", geo_samples, "emitted rows");
    geo_cmd->add_option("--emit", geo_emit, "csv");
    geo_cmd->add_option("--out", geo_out, "output path");

    // hh
    auto* hh_cmd = app.add_subcommand("hh", "almost hyper-Hermitian frame and relation report");
    std::string hh_model = "cp1", hh_at = "0,0", hh_out, hh_report = "json";
    int hh_steps = 2000;
    hh_cmd->add_option("--model", hh_model, "model id");
    hh_cmd->add_option("--at", hh_at, "chart point z,w");
    hh_cmd->add_option("--steps", hh_steps, "transport steps");
    hh_cmd->add_option("--report", hh_report, "report format (json)");
    hh_cmd->add_option("--out", hh_out, "output path");

    // eh
    auto* eh_cmd = app.add_subcommand("eh", "cotangent-bundle hyper-Kaehler data");
    std::string eh_at, eh_out, eh_emit = "json", eh_report = "json";
    int eh_grid = 0;
    eh_cmd->add_option("--at", eh_at, "cotangent point z,u");
    eh_cmd->add_option("--grid", eh_grid, "emit an NxN residual grid as CSV");
    eh_cmd->add_option("--emit", eh_emit, "json|csv");
    eh_cmd->add_option("--report", eh_report, "report format (json)");
    eh_cmd->add_option("--out", eh_out, "output path");

    try {
        app.parse(argc, argv);

        if (suite_cmd->parsed())
            return run_suite_command(suite_model, suite_suites, suite_samples, suite_seed,
                                     suite_tols, suite_emit, suite_out);

        if (eval_cmd->parsed()) {
            const KahlerModel m = build_model(eval_model);
            const ChartPoint p = parse_point(eval_at, m.n);
            const BiLagrangianPackage pkg = bilagrangian_package(m, p);
            const std::map<std::string, const TensorValue*> tensors{
                {"omega", &pkg.omega},   {"H", &pkg.H},   {"J", &pkg.J},
                {"F", &pkg.F},           {"g", &pkg.g},   {"omega1", &pkg.omega1},
                {"omega2", &pkg.omega2}, {"g1", &pkg.g1}, {"g2", &pkg.g2}};
            const auto it = tensors.find(eval_tensor);
            if (it == tensors.end()) throw argument_error("unknown tensor '" + eval_tensor + "'");
            json out{{"model", m.name},
                     {"tensor", eval_tensor},
                     {"at", json::array({complex_json(p.z[0]), complex_json(p.w[0])})},
                     {"value", tensor_json(*it->second)}};
            if (m.n > 1) {
                json zs = json::array(), ws = json::array();
                for (const auto& c : p.z) zs.push_back(complex_json(c));
                for (const auto& c : p.w) ws.push_back(complex_json(c));
                out["at"] = json::array({zs, ws});
            }
            write_output(eval_out, out.dump(2));
            return 0;
        }

        if (chr_cmd->parsed()) {
            const KahlerModel m = build_model(chr_model);
            const ChartPoint p = parse_point(chr_at, m.n);
            const ConnectionTable t = christoffel(m, p);
            const std::size_t h = 2 * m.n;
            json gamma = json::array();
            for (std::size_t k = 0; k < h; ++k) {
                json row = json::array();
                for (std::size_t a = 0; a < h; ++a) {
                    json col = json::array();
                    for (std::size_t b = 0; b < h; ++b)
                        col.push_back(complex_json(t.value(k, a, b)));
                    row.push_back(col);
                }
                gamma.push_back(row);
            }
            json out{{"model", m.name},
                     {"index_order", "gamma[k][a][b] over (z^1..z^n, w^1..w^n)"},
                     {"gamma", gamma}};
            write_output(chr_out, out.dump(2));
            return 0;
        }

        if (geo_cmd->parsed()) {
            if (geo_emit != "csv") throw argument_error("geodesic: only --emit csv is supported");
            const KahlerModel m = build_model(geo_model);
            const ChartPoint start = parse_point(geo_start, m.n);
            const ChartPoint vel = parse_point(geo_vel, m.n);  // reuse the z,w parser
            const GeodesicState s0(start, vel.z, vel.w);
            const auto rows = geodesic_trajectory(m, s0, geo_t, geo_steps, geo_samples);
            std::string csv = "t";
            for (std::size_t j = 1; j <= m.n; ++j) {
                const std::string sj = m.n == 1 ? "" : std::to_string(j);
                csv += ",re_z" + sj + ",im_z" + sj + ",re_w" + sj + ",im_w" + sj;
            }
            csv += "\n";
            for (const auto& [t, st] : rows) {
                csv += csv_number(t);
                for (std::size_t j = 0; j < m.n; ++j) {
                    csv += "," + csv_number(st.position.z[j].real());
                    csv += "," + csv_number(st.position.z[j].imag());
                    csv += "," + csv_number(st.position.w[j].real());
                    csv += "," + csv_number(st.position.w[j].imag());
                }
                csv += "\n";
            }
            write_output(geo_out, csv);
            return 0;
        }

        if (hh_cmd->parsed()) {
            if (hh_report != "json") throw argument_error("hh: only --report json is supported");
            const KahlerModel m = build_model(hh_model);
            const ChartPoint p = parse_point(hh_at, m.n);
            const QuaternionFrame f = hh_frame(m, p, hh_steps);
            const ValidationReport rep = relation_report(m, p, f, bilagrangian_package(m, p));
            json frame{{"g", tensor_json(f.g)},
                       {"I", tensor_json(f.I)},
                       {"J", tensor_json(f.J)},
                       {"K", tensor_json(f.K)},
                       {"omega_I", tensor_json(f.omegaI)},
                       {"omega_J", tensor_json(f.omegaJ)},
                       {"omega_K", tensor_json(f.omegaK)}};
            if (f.eta) frame["eta"] = complex_json(*f.eta);
            json out{{"model", m.name}, {"frame", frame}, {"report", to_json(rep)}};
            write_output(hh_out, out.dump(2));
            return rep.pass() ? 0 : 1;
        }

        if (eh_cmd->parsed()) {
            if (eh_grid > 0) {
                std::string csv = "a,b,re_z,im_z,re_u,im_u,r,ma_residual\n";
                for (int i = 0; i < eh_grid; ++i)
                    for (int j = 0; j < eh_grid; ++j) {
                        const real a = eh_grid == 1 ? 0 : -2 + 4 * real(i) / (eh_grid - 1);
                        const real b = eh_grid == 1 ? 0 : -2 + 4 * real(j) / (eh_grid - 1);
                        const CotangentPoint p{cplx(a, 0.25L * a), cplx(0.6L * b, -0.2L * b)};
                        csv += csv_number(a) + "," + csv_number(b);
                        csv += "," + csv_number(p.z.real()) + "," + csv_number(p.z.imag());
                        csv += "," + csv_number(p.u.real()) + "," + csv_number(p.u.imag());
                        csv += "," + csv_number(p.r());
                        csv += "," + csv_number(monge_ampere_residual(p)) + "\n";
                    }
                write_output(eh_out, csv);
                return 0;
            }
            if (eh_at.empty()) throw argument_error("eh: provide --at z,u or --grid N");
            const ChartPoint chart = parse_point(eh_at, 1);
            const CotangentPoint p{chart.z[0], chart.w[0]};
            const EHFrame f = eh_frame(p);
            const EHPotential pot = eh_potential(p.r());
            json out{{"at", json::array({complex_json(p.z), complex_json(p.u)})},
                     {"r", static_cast<double>(p.r())},
                     {"potential",
                      {{"y", static_cast<double>(pot.y)},
                       {"yp", static_cast<double>(pot.yp)},
                       {"ypp", static_cast<double>(pot.ypp)},
                       {"ode_residual", static_cast<double>(pot.ode_residual())}}},
                     {"phi",
                      {{"zz", complex_json(f.phi.zz)},
                       {"uz", complex_json(f.phi.uz)},
                       {"zu", complex_json(f.phi.zu)},
                       {"uu", complex_json(f.phi.uu)}}},
                     {"ma_residual", static_cast<double>(monge_ampere_residual(p))},
                     {"g", tensor_json(f.g)},
                     {"I", tensor_json(f.I)},
                     {"J", tensor_json(f.J)},
                     {"K", tensor_json(f.K)},
                     {"omega_I", tensor_json(f.omegaI)},
                     {"omega_J", tensor_json(f.omegaJ)},
                     {"omega_K", tensor_json(f.omegaK)}};
            write_output(eh_out, out.dump(2));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const argument_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
