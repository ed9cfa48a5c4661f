// Command-line front end. Exit codes: 0 done (whatever the verdict), 2 invalid input, 3 numeric failure.
#include "cvxproj/gallery.hpp"
#include "cvxproj/io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace cvxproj;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalidInput = 2;
constexpr int kNumericFailure = 3;

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError("cannot parse number '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw InputError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") std::cout << content;
    else write_file_atomic(path, content);
}

std::string csv_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

struct CertifyArgs {
    std::string group;
    int length = 12;
    bool box = false;
    std::string out, csv;
};

int cmd_certify(const CertifyArgs& a, std::uint64_t seed) {
    AnyGroup g = group_from_json(read_json_file(a.group));
    if (a.length < 0) throw InputError("--max-word-length must be nonnegative");
    CertificationReport r = certify_group(g, a.length, a.box, seed);
    emit(a.out, to_json(r).dump(2) + "\n");
    if (!a.csv.empty()) write_file_atomic(a.csv, divergence_csv(r.divergence));
    std::cerr << "summary: " << r.summary << "\n";
    return kOk;
}

struct CuspArgs {
    std::string rho, spec, psi, phi = "quadratic", out;
    int s = -1;
    int samples = 1000;
};

int cmd_build_cusp(const CuspArgs& a, std::uint64_t seed) {
    GenCuspSpec spec = [&] {
        if (!a.spec.empty()) {
            auto dir = std::filesystem::path(a.spec).parent_path().string();
            return cusp_spec_from_json(read_json_file(a.spec), dir.empty() ? "." : dir);
        }
        if (a.rho.empty() || a.s < 0) throw InputError("build-cusp needs --rho and --s (or --spec)");
        json j = {{"s", a.s}, {"psi", a.psi.empty() ? std::vector<double>{} : parse_list(a.psi)}, {"rho", a.rho}, {"phi", a.phi}};
        return cusp_spec_from_json(j, ".");
    }();
    if (a.samples < 1) throw InputError("--samples must be positive");
    CuspBuildReport r = build_cusp_report(spec, a.samples, seed);
    emit(a.out, to_json(r).dump(2) + "\n");
    std::cerr << "invariance max residual " << r.invariance.max_residual << ", min Hessian eigenvalue " << r.min_hessian
              << (r.passed() ? " (passed)" : " (FAILED)") << "\n";
    return kOk;
}

int cmd_gallery(const std::string& name, const std::vector<std::string>& params, const std::string& out) {
    std::map<std::string, long> p;
    for (const auto& kv : params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--param expects k=v, got '" + kv + "'");
        try {
            p[kv.substr(0, eq)] = std::stol(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("--param value must be an integer: '" + kv + "'");
        }
    }
    GalleryEntry e = [&] {
        try {
            return gallery_entry(name, p);
        } catch (const std::invalid_argument& err) {
            throw InputError(err.what());
        }
    }();
    emit(out, group_to_json(e.group).dump(2) + "\n");
    return kOk;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
            rows.push_back(parse_list(line));
        } catch (const InputError&) {
            if (!first) throw;  // a non-numeric first line is a header
        }
        first = false;
    }
    return rows;
}

int cmd_hilbert(const std::string& domain_path, const std::string& pairs, const std::string& out) {
    auto dom = domain_from_json(read_json_file(domain_path));
    const auto d = static_cast<std::size_t>(dom->dim());
    std::ostringstream os;
    for (std::size_t i = 0; i < d; ++i) os << "x" << i + 1 << ',';
    for (std::size_t i = 0; i < d; ++i) os << "y" << i + 1 << ',';
    os << "distance\n";
    for (const auto& row : read_csv_rows(pairs)) {
        if (row.size() != 2 * d) throw InputError("pairs: each row needs " + std::to_string(2 * d) + " numbers");
        Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(d));
        Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(row.data() + d, static_cast<Eigen::Index>(d));
        if (!dom->contains(x) || !dom->contains(y)) throw InputError("pairs: point outside the domain");
        for (double v : row) os << csv_number(v) << ',';
        os << csv_number(hilbert_distance(*dom, x, y)) << '\n';
    }
    emit(out, os.str());
    return kOk;
}

struct SmoothArgs {
    std::string domain, support, out;
    double level = 0.5;
    int samples = 100;
};

int cmd_smooth(const SmoothArgs& a, std::uint64_t seed) {
    auto dom = domain_from_json(read_json_file(a.domain));
    auto support = parse_list(a.support);
    Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(support.data(), static_cast<Eigen::Index>(support.size()));
    if (phi.size() != dom->dim() + 1) throw InputError("--support needs dim + 1 entries");
    if (!(a.level > 0)) throw InputError("--level must be positive");
    if (a.samples < 1) throw InputError("--samples must be positive");
    auto smoothed = [&] {
        try {
            if (auto p = dynamic_cast<const PolyDomain*>(dom.get())) return smooth_domain(*p, phi, a.level);
            if (auto e = dynamic_cast<const EllipsoidDomain*>(dom.get())) return smooth_domain(*e, phi, a.level);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        throw InputError("smooth: domain must be a polytope or an ellipsoid");
    }();
    const auto d = static_cast<std::size_t>(dom->dim());
    std::ostringstream os;
    for (std::size_t i = 0; i < d; ++i) os << "z" << i + 1 << ',';
    os << "defining_value\n";
    for (const auto& z : smoothed.boundary_sample(a.samples, static_cast<unsigned>(seed))) {
        for (Eigen::Index i = 0; i < z.size(); ++i) os << csv_number(z(i)) << ',';
        os << csv_number(smoothed.defining_function ? smoothed.defining_function(z) : 0.0) << '\n';
    }
    emit(a.out, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convex projective structures: cusp holonomy certification and domain tools"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Seed for all random sampling")->capture_default_str();

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "Run the holonomy checks on a group file");
    certify->add_option("group", ca.group, "Group JSON")->required();
    certify->add_option("-L,--max-word-length", ca.length, "Word length (or parameter radius with --box)")->capture_default_str();
    certify->add_flag("--box", ca.box, "Sample the closed-form parameter box instead of words");
    certify->add_option("--out", ca.out, "Report JSON (default stdout)");
    certify->add_option("--csv", ca.csv, "Divergence CSV");
    certify->add_option("--seed", seed, "Seed for all random sampling");

    CuspArgs cu;
    auto* cusp = app.add_subcommand("build-cusp", "Build a generalized cusp and run its checks");
    cusp->add_option("--rho", cu.rho, "Group JSON of the cusp translations");
    cusp->add_option("--s", cu.s, "Simplex factor dimension");
    cusp->add_option("--psi", cu.psi, "Comma-separated positive weights");
    cusp->add_option("--phi", cu.phi, "Graph function")->capture_default_str();
    cusp->add_option("--spec", cu.spec, "Cusp spec JSON instead of --rho/--s/--psi/--phi");
    cusp->add_option("--samples", cu.samples, "Samples per check")->capture_default_str();
    cusp->add_option("--out", cu.out, "Report JSON (default stdout)");
    cusp->add_option("--seed", seed, "Seed for all random sampling");

    std::string gname, gout;
    std::vector<std::string> gparams;
    auto* gallery = app.add_subcommand("gallery", "Write a gallery group as JSON");
    gallery->add_option("name", gname, "Gallery id")->required();
    gallery->add_option("--param", gparams, "Parameter k=v (repeatable)");
    gallery->add_option("--out", gout, "Group JSON (default stdout)");

    std::string hdomain, hpairs, hout;
    auto* hilbert = app.add_subcommand("hilbert", "Hilbert distances for point pairs");
    hilbert->add_option("--domain", hdomain, "Domain JSON")->required();
    hilbert->add_option("--pairs", hpairs, "CSV rows x_1..x_d,y_1..y_d")->required();
    hilbert->add_option("--out", hout, "Distance CSV (default stdout)");

    SmoothArgs sa;
    auto* smooth = app.add_subcommand("smooth", "Sample the boundary of a smoothed domain");
    smooth->add_option("--domain", sa.domain, "Domain JSON")->required();
    smooth->add_option("--support", sa.support, "Comma-separated supporting covector (dim + 1 entries)")->required();
    smooth->add_option("--level", sa.level, "Sublevel factor")->capture_default_str();
    smooth->add_option("--samples", sa.samples, "Boundary samples")->capture_default_str();
    smooth->add_option("--out", sa.out, "Boundary CSV (default stdout)");
    smooth->add_option("--seed", seed, "Seed for all random sampling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInput;
    }

    try {
        if (*certify) return cmd_certify(ca, seed);
        if (*cusp) return cmd_build_cusp(cu, seed);
        if (*gallery) return cmd_gallery(gname, gparams, gout);
        if (*hilbert) return cmd_hilbert(hdomain, hpairs, hout);
        if (*smooth) return cmd_smooth(sa, seed);
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
    return kInvalidInput;
}
