#include "qsys/io.hpp"
#include "qsys/expr.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsys {

namespace {

[[noreturn]] void input_error(const std::string &what) { throw std::invalid_argument(what); }

RationalFunction parse_coeff(const Json &cell, const std::vector<std::string> &vars) {
    if (!cell.is_string()) input_error("coefficient must be an expression string");
    return parse_rational_function(cell.get<std::string>(), vars);
}

} // namespace

LoadedSystem parse_system(const Json &j) {
    LoadedSystem out;
    if (j.contains("poles")) {
        if (!j.contains("residues")) input_error("fuchsian file needs \"residues\"");
        std::vector<GaussianRational> poles;
        for (const auto &p : j.at("poles")) {
            if (!p.is_string()) input_error("poles must be expression strings");
            poles.push_back(parse_gaussian(p.get<std::string>()));
        }
        std::vector<GMat> residues;
        for (const auto &rm : j.at("residues")) {
            GMat A;
            for (const auto &row : rm) {
                std::vector<GaussianRational> r;
                for (const auto &cell : row) {
                    if (!cell.is_string()) input_error("residue entries must be expression strings");
                    r.push_back(parse_gaussian(cell.get<std::string>()));
                }
                A.push_back(std::move(r));
            }
            residues.push_back(std::move(A));
        }
        out.format = "fuchsian";
        out.fuchsian = FuchsianSystem(std::move(poles), std::move(residues));
        return out;
    }
    if (!j.contains("n") || !j.contains("variables") || !j.contains("entries"))
        input_error("system file needs either poles/residues or n/variables/entries");
    int n = j.at("n").get<int>();
    std::vector<std::string> vars = j.at("variables").get<std::vector<std::string>>();
    MatrixOneForm form(n, vars);
    const Json &entries = j.at("entries");
    if (int(entries.size()) != n) input_error("entries must have n rows");
    for (int i = 0; i < n; ++i) {
        const Json &row = entries[std::size_t(i)];
        if (int(row.size()) != n) input_error("entries must have n columns per row");
        for (int jj = 0; jj < n; ++jj) {
            const Json &cell = row[std::size_t(jj)];
            auto apply = [&](const Json &one) {
                if (!one.contains("dt") || !one.contains("coeff"))
                    input_error("form cell needs {\"dt\", \"coeff\"}");
                std::string var = one.at("dt").get<std::string>();
                RationalFunction val = parse_coeff(one.at("coeff"), vars);
                auto it = std::find(vars.begin(), vars.end(), var);
                if (it == vars.end()) input_error("unknown differential d" + var);
                int k = int(it - vars.begin());
                form.set_coeff(i, jj, k, form.coeff(i, jj, k) + val);
            };
            if (cell.is_array())
                for (const auto &one : cell) apply(one);
            else if (cell.is_object())
                apply(cell);
            else if (!cell.is_null())
                input_error("form cell must be an object, an array of objects, or null");
        }
    }
    out.format = "matrix-form";
    out.form = std::move(form);
    return out;
}

LoadedSystem load_system(const std::string &path) {
    try {
        return parse_system(load_json(path));
    } catch (const Json::parse_error &e) {
        input_error(std::string("parse error in ") + path + ": " + e.what());
    }
}

FuchsianSystem as_fuchsian(const LoadedSystem &sys) {
    if (sys.fuchsian) return *sys.fuchsian;
    ToFuchsianResult conv = to_fuchsian(*sys.form);
    if (!conv.system) throw std::domain_error("system is not Fuchsian: " + conv.rejection);
    return *conv.system;
}

MatrixOneForm as_form(const LoadedSystem &sys) {
    if (sys.form) return *sys.form;
    return fuchsian_to_form(*sys.fuchsian);
}

Json system_to_json(const MatrixOneForm &omega) {
    Json j;
    j["n"] = omega.n();
    j["variables"] = omega.variables();
    Json rows = Json::array();
    for (int i = 0; i < omega.n(); ++i) {
        Json row = Json::array();
        for (int jj = 0; jj < omega.n(); ++jj) {
            Json cell = Json::array();
            for (int k = 0; k < omega.m(); ++k) {
                const RationalFunction &c = omega.coeff(i, jj, k);
                if (c.is_zero()) continue;
                cell.push_back(Json{{"dt", omega.variables()[std::size_t(k)]}, {"coeff", c.str()}});
            }
            row.push_back(cell.empty() ? Json() : cell);
        }
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

Json system_to_json(const FuchsianSystem &f) {
    Json j;
    Json poles = Json::array();
    for (const auto &p : f.poles()) poles.push_back(p.str());
    Json residues = Json::array();
    for (const auto &A : f.residues()) {
        Json mat = Json::array();
        for (const auto &row : A) {
            Json r = Json::array();
            for (const auto &v : row) r.push_back(v.str());
            mat.push_back(r);
        }
        residues.push_back(mat);
    }
    j["poles"] = poles;
    j["residues"] = residues;
    return j;
}

Json certificate_to_json(const QuasiunipotenceCertificate &cert) {
    Json j;
    j["verdict"] = verdict_name(cert.verdict);
    Json findings = Json::array();
    for (const auto &f : cert.findings) {
        Json e;
        e["location"] = f.location;
        e["method"] = f.method;
        e["verdict"] = verdict_name(f.verdict);
        Json eig = Json::array();
        for (const auto &[r, mult] : f.rational_eigenvalues)
            eig.push_back(Json{{"value", r.str()}, {"multiplicity", mult}});
        e["rational_eigenvalues"] = eig;
        e["monodromy_orders"] = f.monodromy_orders;
        e["splits_over_q"] = f.splits_over_q;
        e["real_spectrum"] = f.real_spectrum;
        e["resonant"] = f.resonant;
        e["notes"] = f.notes;
        findings.push_back(e);
    }
    j["per_pole"] = findings;
    j["notes"] = cert.notes;
    return j;
}

namespace {
Json log_magnitude_to_json(const LogMagnitude &v) {
    Json j;
    if (v.value) j["value"] = format_double(*v.value);
    j["log2"] = format_double(v.log2);
    j["log2log2"] = format_double(v.log2log2);
    return j;
}
LogMagnitude log_magnitude_from_json(const Json &j) {
    LogMagnitude v;
    if (j.contains("value")) v.value = std::stod(j.at("value").get<std::string>());
    v.log2 = std::stod(j.at("log2").get<std::string>());
    v.log2log2 = std::stod(j.at("log2log2").get<std::string>());
    return v;
}
} // namespace

Json bound_report_to_json(const BoundReport &report) {
    Json j;
    j["kind"] = report.kind;
    j["value"] = log_magnitude_to_json(report.value);
    j["n"] = report.n;
    j["m"] = report.m;
    j["d"] = report.d;
    j["s"] = format_double(report.s);
    j["rho"] = format_double(report.rho_value);
    j["delta"] = report.delta;
    Json spec = Json::array();
    for (const auto &r : report.spectrum) spec.push_back(r.str());
    j["spectrum"] = spec;
    Json consts = Json::array();
    for (const auto &c : report.constants)
        consts.push_back(
            Json{{"constant", c.constant}, {"source", c.source}, {"configured", format_double(c.configured)}});
    j["constants_provenance"] = consts;
    j["formula"] = report.formula;
    if (report.direct_shape) j["direct_shape"] = log_magnitude_to_json(*report.direct_shape);
    return j;
}

BoundReport bound_report_from_json(const Json &j) {
    BoundReport r;
    r.kind = j.at("kind").get<std::string>();
    r.value = log_magnitude_from_json(j.at("value"));
    r.n = j.at("n").get<int>();
    r.m = j.at("m").get<int>();
    r.d = j.at("d").get<int>();
    r.s = std::stod(j.at("s").get<std::string>());
    r.rho_value = std::stod(j.at("rho").get<std::string>());
    r.delta = j.at("delta").get<int>();
    for (const auto &s : j.at("spectrum")) r.spectrum.push_back(Rational::parse(s.get<std::string>()));
    for (const auto &c : j.at("constants_provenance"))
        r.constants.push_back({c.at("constant").get<std::string>(), c.at("source").get<std::string>(),
                               std::stod(c.at("configured").get<std::string>())});
    r.formula = j.at("formula").get<std::string>();
    if (j.contains("direct_shape")) r.direct_shape = log_magnitude_from_json(j.at("direct_shape"));
    return r;
}

Json complexity_to_json(const ComplexityReport &c) {
    Json j;
    j["s"] = c.s.get_str();
    j["d"] = c.d;
    j["n"] = c.n;
    j["m"] = c.m;
    return j;
}

Json monodromy_to_json(const MonodromyResult &m) {
    Json j;
    Json mat = Json::array();
    for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.matrix.cols(); ++k) row.push_back(complex_to_json(m.matrix(i, k)));
        mat.push_back(row);
    }
    j["matrix"] = mat;
    j["error_estimate"] = format_double(m.error_estimate);
    j["abel_residual"] = format_double(m.abel_residual);
    Json eig = Json::array();
    for (const auto &e : m.eigenvalues) eig.push_back(complex_to_json(e));
    j["eigenvalues"] = eig;
    Json dev = Json::array();
    for (double d : m.unit_circle_deviation) dev.push_back(format_double(d));
    j["unit_circle_deviation"] = dev;
    Json ord = Json::array();
    for (const auto &o : m.candidate_orders) ord.push_back(o ? Json(*o) : Json());
    j["candidate_orders"] = ord;
    return j;
}

Json zero_count_to_json(const ZeroCount &z) {
    Json j;
    j["count"] = z.count;
    j["winding_residual"] = format_double(z.winding_residual);
    j["refinement_depth"] = z.refinement_depth;
    j["dilations"] = z.dilations;
    j["reliable"] = z.reliable;
    Json c = Json::array();
    for (Eigen::Index i = 0; i < z.combination.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < z.combination.cols(); ++k)
            row.push_back(complex_to_json(z.combination(i, k)));
        c.push_back(row);
    }
    j["combination"] = c;
    j["counting"] = "argument-principle (with multiplicity)";
    return j;
}

BoundConfig bound_config_from_json(const Json &j) {
    BoundConfig cfg;
    if (j.contains("rho_poly_coeffs")) {
        const Json &r = j.at("rho_poly_coeffs");
        if (r.contains("uniform")) cfg.rho_poly_coefficient = r.at("uniform").get<double>();
        if (r.contains("override")) cfg.rho_poly_override = r.at("override").get<double>();
    }
    if (j.contains("q_poly_K")) cfg.q_poly_K = j.at("q_poly_K").get<double>();
    if (j.contains("q_poly_override")) cfg.q_poly_override = j.at("q_poly_override").get<double>();
    if (j.contains("field_ext_poly")) {
        const Json &r = j.at("field_ext_poly");
        if (r.contains("uniform")) cfg.field_ext_poly_coefficient = r.at("uniform").get<double>();
        if (r.contains("override")) cfg.field_ext_poly_override = r.at("override").get<double>();
    }
    return cfg;
}

BoundConfig load_bound_config(const std::string &path) {
    if (path.empty()) return {};
    return bound_config_from_json(load_json(path));
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2) input_error("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Triangle triangle_from_json(const Json &j) {
    Triangle t;
    const Json &vs = j.at("vertices");
    if (vs.size() != 3) input_error("triangle needs exactly three vertices");
    for (int i = 0; i < 3; ++i) t.vertices[std::size_t(i)] = complex_from_json(vs[std::size_t(i)]);
    if (j.contains("bulges")) {
        const Json &bs = j.at("bulges");
        if (bs.size() != 3) input_error("triangle needs exactly three bulges");
        for (int i = 0; i < 3; ++i) t.bulges[std::size_t(i)] = bs[std::size_t(i)].get<double>();
    }
    return t;
}

Json triangle_to_json(const Triangle &t) {
    Json j;
    Json vs = Json::array();
    for (const auto &v : t.vertices) vs.push_back(complex_to_json(v));
    j["vertices"] = vs;
    j["bulges"] = Json::array({t.bulges[0], t.bulges[1], t.bulges[2]});
    return j;
}

FlowSpec flow_spec_from_json(const Json &j) {
    FlowSpec out;
    LoadedSystem sys = parse_system(j.at("system"));
    FuchsianSystem f = as_fuchsian(sys);
    NumericFuchsian nf = NumericFuchsian::from(f);
    const Json &trajs = j.at("trajectories");
    if (trajs.size() != nf.poles.size())
        input_error("flow spec needs one trajectory per pole");
    for (std::size_t i = 0; i < nf.poles.size(); ++i) {
        PoleTrajectory traj;
        for (const auto &w : trajs[i]) traj.waypoints.push_back(complex_from_json(w));
        if (traj.waypoints.empty()) input_error("empty trajectory");
        if (std::abs(traj.waypoints.front() - nf.poles[i]) > 1e-9)
            input_error("trajectory " + std::to_string(i) + " must start at the system pole");
        out.path.trajectories.push_back(std::move(traj));
        out.path.initial_residues.push_back(nf.residues[i]);
    }
    if (j.contains("checkpoints")) out.options.checkpoints = j.at("checkpoints").get<int>();
    if (j.contains("tol")) out.options.tol = j.at("tol").get<double>();
    if (j.contains("freeze_residues")) out.options.freeze_residues = j.at("freeze_residues").get<bool>();
    out.path.validate();
    return out;
}

Json checkpoint_to_json(const FlowCheckpoint &ck) {
    Json j;
    j["tau"] = format_double(ck.tau);
    Json poles = Json::array();
    for (const auto &p : ck.system.poles) poles.push_back(complex_to_json(p));
    j["poles"] = poles;
    Json res = Json::array();
    for (const auto &A : ck.system.residues) {
        Json mat = Json::array();
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(complex_to_json(A(i, k)));
            mat.push_back(row);
        }
        res.push_back(mat);
    }
    j["residues"] = res;
    return j;
}

Json event_to_json(const FlowEvent &ev) {
    return Json{{"tau", format_double(ev.tau)}, {"kind", ev.kind}, {"detail", ev.detail}};
}

std::vector<Fixture> load_fixture_index(const std::string &dir) {
    Json idx = load_json(dir + "/index.json");
    std::vector<Fixture> out;
    for (const auto &e : idx) {
        Fixture f;
        f.name = e.at("name").get<std::string>();
        f.file = dir + "/" + e.at("file").get<std::string>();
        if (e.contains("notes")) f.notes = e.at("notes").get<std::string>();
        if (e.contains("expected")) {
            f.expected = e.at("expected");
            for (const auto &[key, val] : f.expected.items()) {
                if (!val.contains("provenance")) input_error("fixture " + f.name + " expected value " +
                                                             key + " lacks a provenance tag");
                std::string p = val.at("provenance").get<std::string>();
                if (p != "paper" && p != "trivial" && p != "derived-with-oracle")
                    input_error("fixture " + f.name + ": unknown provenance " + p);
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void save_json(const std::string &path, const Json &j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

Json load_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

CsvWriter::CsvWriter(std::string schema_comment, std::vector<std::string> columns)
    : schema_(std::move(schema_comment)), columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<std::string> &cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("CSV row width mismatch");
    rows_.push_back(cells);
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    os << "# " << schema_ << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto &row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void CsvWriter::save(const std::string &path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << str();
}

} // namespace qsys
