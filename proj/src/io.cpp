#include "cvxproj/io.hpp"

#include "cvxproj/gallery.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cvxproj {

using nlohmann::json;

// ---- Scalars ----

json scalar_to_json(double x) { return x; }

json scalar_to_json(const Rational& x) {
    std::ostringstream os;
    os << numerator(x) << "/" << denominator(x);
    return os.str();
}

json scalar_to_json(const QuadSqrt2& x) { return {{"a", scalar_to_json(x.a())}, {"b", scalar_to_json(x.b())}}; }

template <> double scalar_from_json<double>(const json& j) {
    if (!j.is_number()) throw InputError("float64 scalar: expected a number, got " + j.dump());
    return j.get<double>();
}

template <> Rational scalar_from_json<Rational>(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw InputError("rational scalar: expected a \"p/q\" string, got " + j.dump());
    const auto s = j.get<std::string>();
    try {
        Rational r(s);
        return r;
    } catch (const std::exception&) {
        throw InputError("rational scalar: cannot parse '" + s + "'");
    }
}

template <> QuadSqrt2 scalar_from_json<QuadSqrt2>(const json& j) {
    if (j.is_number_integer() || j.is_string()) return QuadSqrt2(scalar_from_json<Rational>(j));
    if (!j.is_object() || !j.contains("a") || !j.contains("b"))
        throw InputError("quad_sqrt2 scalar: expected {\"a\", \"b\"}, got " + j.dump());
    return {scalar_from_json<Rational>(j["a"]), scalar_from_json<Rational>(j["b"])};
}

Eigen::VectorXd vector_from_json(const json& j) {
    if (!j.is_array()) throw InputError("vector: expected an array, got " + j.dump());
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from_json<double>(j[i]);
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// ---- Groups ----

std::string scalar_name(const AnyGroup& g) {
    switch (g.index()) {
        case 0: return "float64";
        case 1: return "rational";
        default: return "quad_sqrt2";
    }
}

json group_to_json(const AnyGroup& g) {
    return std::visit(
        [&](const auto& grp) {
            json j;
            j["dim"] = grp.dim();
            j["scalar"] = scalar_name(g);
            json gens = json::array();
            for (std::size_t i = 0; i < grp.base_count(); ++i)
                gens.push_back({{"name", grp.generators()[i].name}, {"matrix", matrix_to_json(grp.generators()[i].matrix)}});
            j["generators"] = gens;
            if (grp.closed_form()) j["closed_form"] = {{"gallery", grp.closed_form()->gallery}, {"params", grp.closed_form()->construction}};
            return j;
        },
        g);
}

namespace {

template <class T> MatrixGroup<T> parse_generators(const json& j, Eigen::Index n) {
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
        throw InputError("group: 'generators' must be a nonempty array");
    std::vector<Generator<T>> gens;
    for (const auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("matrix")) throw InputError("group: each generator needs a 'matrix'");
        std::string name = g.contains("name") && g["name"].is_string() ? g["name"].get<std::string>()
                                                                       : "g" + std::to_string(gens.size() + 1);
        gens.push_back({name, matrix_from_json<T>(g["matrix"], n)});
    }
    try {
        return MatrixGroup<T>(gens);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

template <class T> bool same_generators(const MatrixGroup<T>& a, const MatrixGroup<T>& b) {
    if (a.base_count() != b.base_count()) return false;
    for (std::size_t i = 0; i < a.base_count(); ++i) {
        const auto& x = a.generators()[i].matrix;
        const auto& y = b.generators()[i].matrix;
        if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
        if constexpr (std::is_same_v<T, double>) {
            if (max_abs(x - y) > 1e-12 * std::max(1.0, max_abs(x))) return false;
        } else {
            if (x != y) return false;
        }
    }
    return true;
}

}  // namespace

AnyGroup group_from_json(const json& j) {
    if (!j.is_object()) throw InputError("group: expected a JSON object");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long>() < 1)
        throw InputError("group: 'dim' must be a positive integer");
    const auto n = static_cast<Eigen::Index>(j["dim"].get<long>());
    const std::string scalar = j.value("scalar", std::string("float64"));
    AnyGroup parsed = [&]() -> AnyGroup {
        if (scalar == "float64") return parse_generators<double>(j, n);
        if (scalar == "rational") return parse_generators<Rational>(j, n);
        if (scalar == "quad_sqrt2") return parse_generators<QuadSqrt2>(j, n);
        throw InputError("group: unknown scalar '" + scalar + "'");
    }();
    if (!j.contains("closed_form") || j["closed_form"].is_null()) return parsed;

    const auto& cf = j["closed_form"];
    if (!cf.is_object() || !cf.contains("gallery") || !cf["gallery"].is_string())
        throw InputError("group: closed_form needs a 'gallery' name");
    std::map<std::string, long> params;
    if (cf.contains("params")) {
        if (!cf["params"].is_object()) throw InputError("group: closed_form params must be an object");
        for (const auto& [k, v] : cf["params"].items()) {
            if (!v.is_number_integer()) throw InputError("group: closed_form param '" + k + "' must be an integer");
            params[k] = v.get<long>();
        }
    }
    AnyGroup rebuilt = [&] {
        try {
            return gallery_entry(cf["gallery"].get<std::string>(), params).group;
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }();
    if (rebuilt.index() != parsed.index()) throw InputError("group: closed_form scalar type differs from 'scalar'");
    const bool same = std::visit(
        [&](const auto& r) {
            using G = std::decay_t<decltype(r)>;
            return same_generators(r, std::get<G>(parsed));
        },
        rebuilt);
    if (!same) throw InputError("group: generators do not match the closed_form family");
    return rebuilt;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

// ---- Domains ----

std::unique_ptr<Domain> domain_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw InputError("domain: missing 'kind'");
    const auto kind = j["kind"].get<std::string>();
    try {
        if (kind == "polytope") {
            if (!j.contains("vertices") || !j["vertices"].is_array()) throw InputError("domain: polytope needs 'vertices'");
            std::vector<Eigen::VectorXd> pts;
            for (const auto& v : j["vertices"]) pts.push_back(vector_from_json(v));
            auto poly = convex_hull_in_chart(pts);
            if (j.contains("dim") && j["dim"].get<long>() != poly.dim()) throw InputError("domain: 'dim' disagrees with vertices");
            return std::make_unique<PolyDomain>(poly);
        }
        if (kind == "ellipsoid") {
            if (!j.contains("shape_matrix")) throw InputError("domain: ellipsoid needs 'shape_matrix'");
            const auto& rows = j["shape_matrix"];
            const auto n = static_cast<Eigen::Index>(rows.size());
            Eigen::MatrixXd q = matrix_from_json<double>(rows, n);
            Eigen::VectorXd c = j.contains("center") ? vector_from_json(j["center"]) : Eigen::VectorXd::Zero(n);
            return std::make_unique<EllipsoidDomain>(q, c);
        }
        if (kind == "graph") {
            if (j.value("phi", std::string("quadratic")) != "quadratic") throw InputError("domain: only phi = quadratic is supported");
            if (!j.contains("dim") || !j["dim"].is_number_integer()) throw InputError("domain: graph needs 'dim'");
            return std::make_unique<GraphDomain>(j["dim"].get<long>());
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("domain: ") + e.what());
    }
    throw InputError("domain: unknown kind '" + kind + "'");
}

json domain_to_json(const Domain& d) {
    if (auto p = dynamic_cast<const PolyDomain*>(&d)) {
        json verts = json::array();
        for (const auto& v : p->vertices()) verts.push_back(vector_to_json(v));
        return {{"kind", "polytope"}, {"dim", p->dim()}, {"vertices", verts}};
    }
    if (auto e = dynamic_cast<const EllipsoidDomain*>(&d))
        return {{"kind", "ellipsoid"}, {"dim", e->dim()}, {"shape_matrix", matrix_to_json<double>(e->form())},
                {"center", vector_to_json(e->center())}};
    if (dynamic_cast<const GraphDomain*>(&d)) return {{"kind", "graph"}, {"dim", d.dim()}, {"phi", "quadratic"}};
    throw std::invalid_argument("domain_to_json: unsupported domain '" + d.tag() + "'");
}

// ---- Cusp specs ----

GraphFunction graph_function(const std::string& name) {
    if (name == "quadratic") return quadratic_graph();
    throw InputError("cusp spec: unknown phi '" + name + "'");
}

GenCuspSpec cusp_spec_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw InputError("cusp spec: expected a JSON object");
    if (!j.contains("s") || !j["s"].is_number_integer() || j["s"].get<long>() < 0)
        throw InputError("cusp spec: 's' must be a nonnegative integer");
    const int s = j["s"].get<int>();
    std::vector<double> psi;
    if (j.contains("psi")) {
        if (!j["psi"].is_array()) throw InputError("cusp spec: 'psi' must be an array");
        for (const auto& p : j["psi"]) psi.push_back(scalar_from_json<double>(p));
    }
    if (static_cast<int>(psi.size()) != s) throw InputError("cusp spec: psi needs s entries");
    for (double p : psi)
        if (!(p > 0)) throw InputError("cusp spec: psi entries must be positive");
    if (!j.contains("rho")) throw InputError("cusp spec: missing 'rho'");
    json rho = j["rho"];
    if (rho.is_string()) {
        std::filesystem::path p(rho.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        rho = read_json_file(p.string());
    }
    return GenCuspSpec{s, psi, group_from_json(rho), graph_function(j.value("phi", std::string("quadratic")))};
}

// ---- Certification reports ----

namespace {

Condition condition_from_string(const std::string& s) {
    for (auto c : {Condition::WU, Condition::GP, Condition::GPplus, Condition::Tr, Condition::TRe})
        if (to_string(c) == s) return c;
    throw InputError("unknown condition '" + s + "'");
}

VerdictStatus status_from_string(const std::string& s) {
    for (auto v : {VerdictStatus::certified_on_sample, VerdictStatus::refuted_on_sample, VerdictStatus::inconclusive})
        if (to_string(v) == s) return v;
    throw InputError("unknown verdict status '" + s + "'");
}

Flag flag_from_json(const json& j) {
    return {ProjPoint(vector_from_json(j.at("point"))), ProjHyperplane(vector_from_json(j.at("hyperplane")))};
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ConditionVerdict condition_verdict_from_json(const json& j) {
    ConditionVerdict v;
    v.condition = condition_from_string(j.at("condition").get<std::string>());
    v.status = status_from_string(j.at("status").get<std::string>());
    v.reason = j.value("reason", std::string());
    if (j.contains("witness") && !j["witness"].is_null()) {
        const auto& w = j["witness"];
        v.witness = CoefficientWitness{vector_from_json(w.at("alpha")), vector_from_json(w.at("x")), w.at("delta").get<double>(),
                                       w.at("epsilon").get<double>(), w.at("eta").get<double>(), w.at("bound").get<double>()};
    }
    for (const auto& e : j.value("offending_entries", json::array()))
        v.offending_entries.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    v.offending_words = j.value("offending_words", std::vector<std::string>{});
    if (j.contains("sample")) {
        v.max_length = j["sample"].value("L", 0);
        v.sample_count = j["sample"].value("count", std::size_t{0});
    }
    v.evidence = j.value("evidence", json::object());
    return v;
}

json to_json(const DivergenceReport& r) {
    std::vector<int> divergent(r.divergent.begin(), r.divergent.end());
    std::vector<int> monotone(r.monotone.begin(), r.monotone.end());
    return {{"lengths", r.lengths},
            {"min_ratio", r.min_ratio},
            {"max_entry", r.max_entry},
            {"power_exponent", r.power_exponent},
            {"exponential_rate", r.exponential_rate},
            {"monotone", monotone},
            {"divergent", divergent}};
}

json to_json(const LimitReport& r) {
    json clusters = json::array();
    for (const auto& c : r.clusters)
        clusters.push_back({{"point", vector_to_json(c.representative.point.coords)},
                            {"hyperplane", vector_to_json(c.representative.hyperplane.covector)},
                            {"size", c.size},
                            {"radius", c.radius}});
    return {{"conclusive", r.conclusive}, {"reason", r.reason}, {"clusters", clusters}, {"max_radius", r.max_radius}, {"used", r.used}};
}

bool CertificationReport::consistent() const {
    if (conditions.size() != 5) return false;
    const Condition order[] = {Condition::WU, Condition::GP, Condition::GPplus, Condition::Tr, Condition::TRe};
    for (std::size_t i = 0; i < 5; ++i)
        if (conditions[i].condition != order[i]) return false;
    return summary == summary_verdict(conditions[0].status, conditions[1].status, conditions[2].status, conditions[3].status,
                                      conditions[4].status);
}

CertificationReport certify_group(const AnyGroup& g, int length, bool box_grid, std::uint64_t seed) {
    CertificationReport r;
    json meta = group_to_json(g);
    json names = json::array();
    for (const auto& gen : meta["generators"]) names.push_back(gen["name"]);
    r.group = {{"dim", meta["dim"]}, {"scalar", meta["scalar"]}, {"generators", names},
               {"closed_form", meta.value("closed_form", json(nullptr))}};
    r.length = length;
    r.box_grid = box_grid;
    r.seed = seed;

    auto t0 = std::chrono::steady_clock::now();
    auto [samples, fixed] = std::visit(
        [&](const auto& grp) {
            auto exact = box_grid ? enumerate_parameter_grid(grp, length) : enumerate_words(grp, length);
            return std::make_pair(to_float(grp, exact), fixed_pair(grp));
        },
        g);
    r.timings_ms["sampling"] = ms_since(t0);
    r.sample_count = samples.size();

    t0 = std::chrono::steady_clock::now();
    HolonomyReport h = holonomy_from_samples(samples, fixed, length);
    r.timings_ms["conditions"] = ms_since(t0);
    r.summary = h.summary;
    r.conditions = {h.wu, h.gp, h.gp_plus, h.tr, h.tre};
    r.fixed_pair = to_json(h)["fixed_pair"];

    t0 = std::chrono::steady_clock::now();
    r.divergence = divergence_diagnostics(samples);
    r.limits = limit_flags(samples);
    r.timings_ms["diagnostics"] = ms_since(t0);
    return r;
}

json to_json(const CertificationReport& r) {
    json conds = json::array();
    for (const auto& c : r.conditions) conds.push_back(to_json(c));
    return {{"group", r.group},
            {"sample", {{"L", r.length}, {"count", r.sample_count}, {"box_grid", r.box_grid}, {"seed", r.seed}}},
            {"summary", r.summary},
            {"conditions", conds},
            {"fixed_pair", r.fixed_pair},
            {"divergence", to_json(r.divergence)},
            {"limit_flags", to_json(r.limits)},
            {"timings_ms", r.timings_ms}};
}

CertificationReport certification_report_from_json(const json& j) {
    try {
        CertificationReport r;
        r.group = j.at("group");
        const auto& s = j.at("sample");
        r.length = s.at("L").get<int>();
        r.sample_count = s.at("count").get<std::size_t>();
        r.box_grid = s.value("box_grid", false);
        r.seed = s.value("seed", std::uint64_t{0});
        r.summary = j.at("summary").get<std::string>();
        for (const auto& c : j.at("conditions")) r.conditions.push_back(condition_verdict_from_json(c));
        r.fixed_pair = j.value("fixed_pair", json(nullptr));

        const auto& d = j.at("divergence");
        r.divergence.lengths = d.at("lengths").get<std::vector<int>>();
        r.divergence.min_ratio = d.at("min_ratio").get<std::vector<std::vector<double>>>();
        r.divergence.max_entry = d.at("max_entry").get<std::vector<double>>();
        r.divergence.power_exponent = d.at("power_exponent").get<std::vector<double>>();
        r.divergence.exponential_rate = d.at("exponential_rate").get<std::vector<double>>();
        for (int m : d.at("monotone").get<std::vector<int>>()) r.divergence.monotone.push_back(m != 0);
        for (int m : d.at("divergent").get<std::vector<int>>()) r.divergence.divergent.push_back(m != 0);

        const auto& l = j.at("limit_flags");
        r.limits.conclusive = l.at("conclusive").get<bool>();
        r.limits.reason = l.at("reason").get<std::string>();
        r.limits.max_radius = l.at("max_radius").get<double>();
        r.limits.used = l.at("used").get<std::size_t>();
        for (const auto& c : l.at("clusters"))
            r.limits.clusters.push_back({flag_from_json(c), c.at("size").get<std::size_t>(), c.at("radius").get<double>()});
        r.timings_ms = j.value("timings_ms", std::map<std::string, double>{});
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("certification report: ") + e.what());
    }
}

std::string divergence_csv(const DivergenceReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "word_length,min_sigma1_over_sigma2,max_entry_norm\n";
    for (std::size_t i = 0; i < r.lengths.size(); ++i) {
        os << r.lengths[i] << ',';
        if (!r.min_ratio[i].empty()) os << r.min_ratio[i][0];
        os << ',' << r.max_entry[i] << '\n';
    }
    return os.str();
}

// ---- Cusp reports ----

json residual_histogram(const std::vector<double>& residuals) {
    std::map<int, std::size_t> decades;
    std::size_t zeros = 0;
    for (double r : residuals) {
        if (r == 0) ++zeros;
        else ++decades[static_cast<int>(std::floor(std::log10(r)))];
    }
    json bins = json::array();
    for (auto [k, c] : decades) bins.push_back({{"lower", std::pow(10.0, k)}, {"upper", std::pow(10.0, k + 1)}, {"count", c}});
    return {{"zero", zeros}, {"decades", bins}};
}

CuspBuildReport build_cusp_report(const GenCuspSpec& spec, int samples, std::uint64_t seed) {
    CuspBuildReport r{spec, 0, {}, samples, 0, {}};
    GenRepGroup g = build_genrep(spec);
    r.homomorphism_residual = g.homomorphism_residual(samples, seed);
    r.invariance = horofunction_invariance_check(g, samples, seed);
    r.min_hessian = min_hessian_eigenvalue(spec, samples, seed);
    r.simplex = boundary_simplex(spec);
    return r;
}

json to_json(const CuspBuildReport& r) {
    json verts = json::array();
    for (const auto& v : r.simplex.vertices) verts.push_back(vector_to_json(v));
    const Eigen::Index n = std::visit([](const auto& grp) { return grp.dim(); }, r.spec.rho);
    return {{"s", r.spec.s},
            {"psi", r.spec.psi},
            {"phi", r.spec.phi.name},
            {"rho", group_to_json(r.spec.rho)},
            {"dim", r.spec.s + n},
            {"homomorphism_residual", r.homomorphism_residual},
            {"invariance",
             {{"samples", r.invariance.samples},
              {"max_residual", r.invariance.max_residual},
              {"histogram", residual_histogram(r.invariance.residuals)}}},
            {"hessian", {{"samples", r.hessian_samples}, {"min_eigenvalue", r.min_hessian}}},
            {"boundary_simplex", {{"vertices", verts}, {"c1", r.simplex.c1}}},
            {"passed", r.passed()}};
}

}  // namespace cvxproj
