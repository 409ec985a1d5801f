#include "confdim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "confdim/dimension.hpp"
#include "confdim/separation.hpp"
#include "confdim/tangents.hpp"

namespace confdim::cli {

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

class Record {
public:
    void add(const std::string& key, const std::string& value) { fields_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, num(value)); }
    void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void write(std::ostream& os) const {
        for (const auto& [k, v] : fields_) os << k << '=' << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct Common {
    std::string config;
    std::string output;
    std::string format = "csv";
    long long budget = 0;
    unsigned threads = 1;
    long long seed = 0;
    int depth = -1;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "IFS config file")->required();
    sub->add_option("--output", c.output, "write results here instead of stdout");
    sub->add_option("--format", c.format, "csv or record")->check(CLI::IsMember({"csv", "record"}));
    sub->add_option("--budget", c.budget, "word budget (falls back to CONFORMAL_DIM_BUDGET)");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for Monte Carlo checks");
}

ExecOptions exec_options(const Common& c) {
    ExecOptions ex;
    ex.threads = c.threads;
    long long budget = c.budget;
    if (budget == 0) {
        if (const char* env = std::getenv("CONFORMAL_DIM_BUDGET")) {
            char* end = nullptr;
            budget = std::strtoll(env, &end, 10);
            if (end == env || *end != '\0')
                throw Error(ErrorKind::PreconditionNotMet, "CONFORMAL_DIM_BUDGET is not an integer");
        }
    }
    if (budget < 0 || (budget == 0 && c.budget != 0))
        throw Error(ErrorKind::PreconditionNotMet, "budget must be positive");
    if (budget > 0) ex.word_budget = static_cast<std::uint64_t>(budget);
    return ex;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::BudgetExceeded: return kExitBudget;
        case ErrorKind::ParseError:
        case ErrorKind::NotAContraction:
        case ErrorKind::TrivialSystem:
        case ErrorKind::PoleInDomain:
        case ErrorKind::PoleProximity:
        case ErrorKind::DomainViolation:
        case ErrorKind::PoleEntersDomain:
        case ErrorKind::NoFixedPointInDomain:
        case ErrorKind::InsufficientScales:
        case ErrorKind::PreconditionNotMet: return kExitValidation;
        default: return kExitComputation;
    }
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, long index = -1) {
    err << "error=" << kind;
    if (index >= 0) err << " index=" << index;
    err << " message=" << quoted(message) << '\n';
}

void write_fit_points(std::ostream& os, const DimensionEstimate& d) {
    for (const auto& p : d.fit_points) os << method_name(d.method) << ',' << num(p.x) << ',' << num(p.y) << '\n';
}

void add_estimate(Record& r, const std::string& prefix, const DimensionEstimate& d) {
    r.add(prefix, d.value);
    r.add(prefix + "_raw", d.raw_value);
    r.add(prefix + "_residual", d.residual);
    r.add(prefix + "_scales", d.scales_used);
    for (std::size_t i = 0; i < d.warnings.size(); ++i) r.add(prefix + "_warning_" + std::to_string(i), quoted(d.warnings[i]));
}

void write_separation_csv(std::ostream& os, const SeparationReport& rep) {
    os << "b,multiplicity,witness_x,min_ilc_distance,pair_v,pair_w\n";
    for (std::size_t k = 0; k < rep.b_grid.size(); ++k) {
        os << num(rep.b_grid[k]) << ',' << rep.multiplicities[k].max_count << ',' << num(rep.multiplicities[k].witness_x)
           << ',' << num(rep.ilc_decay[k]) << ',';
        if (rep.best_pairs[k]) os << rep.best_pairs[k]->v.to_string() << ',' << rep.best_pairs[k]->w.to_string();
        else os << ',';
        os << '\n';
    }
}

void add_separation(Record& r, const SeparationReport& rep) {
    r.add("verdict", verdict_name(rep.verdict));
    r.add("gamma_observed", rep.gamma_observed);
    r.add("ilc_final", rep.ilc_decay.empty() ? 0.0 : rep.ilc_decay.back());
    r.add("exact_overlaps", rep.exact_overlaps.size());
}

int cmd_validate(const Common& c, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    const auto& v = sys.validation();
    if (c.format == "csv") {
        os << "map,kind,contraction,fixed_point,orientation\n";
        for (std::size_t i = 0; i < sys.size(); ++i)
            os << i << ',' << (sys.map(i).kind() == MapKind::Affine ? "affine" : "moebius") << ','
               << num(v.contraction_constants[i]) << ',' << num(v.fixed_points[i]) << ',' << v.orientation[i] << '\n';
        os << '\n';
    }
    Record r;
    r.add("status", "ok");
    r.add("maps", sys.size());
    r.add("all_affine", sys.all_affine());
    r.add("rescaled", v.rescaled);
    r.add("rescale_scale", v.rescale_scale);
    r.add("rescale_shift", v.rescale_shift);
    r.add("x0", sys.x0());
    r.add("x1", sys.x1());
    r.add("f1", sys.f1_index());
    r.add("max_contraction", sys.max_contraction());
    for (std::size_t i = 0; i < v.warnings.size(); ++i) r.add("warning_" + std::to_string(i), quoted(v.warnings[i]));
    r.write(os);
    return kExitOk;
}

int cmd_cylinders(const Common& c, double b, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    ExecOptions ex = exec_options(c);
    std::vector<CylinderRecord> recs;
    if (b > 0.0) recs = stopping_set(sys, b, ex).records;
    else recs = words_of_length(sys, static_cast<std::size_t>(c.depth < 0 ? 4 : c.depth), ex);
    if (c.format == "csv") {
        os << "word,lo,hi,diam,deriv_lo,deriv_hi\n";
        for (const auto& r : recs)
            os << r.word.to_string() << ',' << num(r.image.lo) << ',' << num(r.image.hi) << ',' << num(r.diam) << ','
               << num(r.deriv_lo) << ',' << num(r.deriv_hi) << '\n';
        os << '\n';
    }
    Record r;
    r.add("cylinders", recs.size());
    r.add("distinct_maps", distinct_maps(recs).size());
    r.write(os);
    return kExitOk;
}

int cmd_separation(const Common& c, SeparationParams p, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    if (c.depth >= 0) p.depth = c.depth;
    SeparationReport rep = separation_verdict(sys, p, exec_options(c));
    if (c.format == "csv") {
        write_separation_csv(os, rep);
        os << '\n';
    }
    Record r;
    r.add("depth", p.depth);
    add_separation(r, rep);
    r.write(os);
    return kExitOk;
}

int cmd_dimension(const Common& c, const std::string& method, int decades, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    ExecOptions ex = exec_options(c);
    std::vector<DimensionEstimate> ests;
    if (method == "box" || method == "all") {
        auto res = default_box_resolutions(sys);
        ests.push_back(box_dimension(sys, res, ex));
    }
    if (method == "bowen" || method == "all")
        ests.push_back(bowen_dimension(sys, c.depth > 0 ? c.depth : default_bowen_depth(sys), 1e-10, ex));
    if (method == "assouad" || method == "all") ests.push_back(assouad_estimate(sys, 2, decades, ex));
    if (c.format == "csv") {
        os << "method,x,y\n";
        for (const auto& d : ests) write_fit_points(os, d);
        os << '\n';
    }
    Record r;
    for (const auto& d : ests) add_estimate(r, method_name(d.method), d);
    r.write(os);
    return kExitOk;
}

int cmd_tangent(const Common& c, int i, TangentParams tp, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    ExecOptions ex = exec_options(c);
    int depth = c.depth > 0 ? c.depth : 10;
    auto pairs = select_tangent_pairs(sys, depth, 0, tp, ex);
    TangentWitness w = build_tangent_attempt(sys, pairs, i, tp);
    if (c.format == "csv") {
        os << "n,k,m,point,increment\n";
        for (const auto& s : w.steps)
            os << s.n << ',' << s.pair_index << ',' << s.m << ',' << num(s.point) << ',' << num(s.increment) << '\n';
        os << '\n';
    }
    const char* verdict = "ok";
    if (w.failed_step) verdict = "step_selection_failed";
    else if (w.left_gap > w.epsilon) verdict = "left_gap_exceeded";
    else if (!(w.alpha < tp.alpha_cap)) verdict = "alpha_exceeded";
    Record r;
    r.add("i", i);
    r.add("epsilon", w.epsilon);
    r.add("side", side_name(w.side));
    r.add("pairs", w.pairs.size());
    r.add("steps", w.steps.size());
    r.add("left_gap", w.left_gap);
    r.add("alpha", w.alpha);
    r.add("alpha_cap", tp.alpha_cap);
    r.add("sample_size", w.sample_size);
    r.add("verdict", verdict);
    if (w.failed_step) r.add("failed_step", *w.failed_step);
    r.write(os);
    return kExitOk;
}

int cmd_report(const Common& c, std::ostream& os) {
    IfsSystem sys = load_system_file(c.config);
    DichotomyParams p;
    if (c.depth >= 0) p.separation.depth = c.depth;
    DichotomyReport rep = dichotomy_report(sys, p, exec_options(c));
    Record r;
    r.add("branch", branch_name(rep.branch));
    r.add("dim_h_full", rep.dim_h_full);
    r.add("hausdorff", rep.hausdorff);
    add_estimate(r, "bowen", rep.bowen);
    add_estimate(r, "box", rep.box);
    add_estimate(r, "assouad", rep.assouad);
    r.add("assouad_witness_center", rep.assouad.witness_center);
    r.add("assouad_witness_R", rep.assouad.witness_R);
    add_separation(r, rep.separation);
    r.write(os);
    if (c.format == "csv") {
        os << '\n';
        write_separation_csv(os, rep.separation);
        os << '\n' << "method,x,y\n";
        for (const auto* d : {&rep.bowen, &rep.box, &rep.assouad}) write_fit_points(os, *d);
    }
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analysis of one-dimensional self-conformal iterated function systems", "confdim"};
    app.require_subcommand(1);

    Common c;
    double cyl_b = 0.0;
    SeparationParams sep;
    std::string method = "all";
    int decades = 3;
    int tangent_i = 1;
    TangentParams tp;

    auto* validate = app.add_subcommand("validate", "load and validate a system");
    add_common(validate, c);

    auto* cylinders = app.add_subcommand("cylinders", "dump words of length --depth, or the stopping set at --b");
    add_common(cylinders, c);
    cylinders->add_option("--depth", c.depth, "word length")->check(CLI::NonNegativeNumber);
    cylinders->add_option("--b", cyl_b, "stopping scale")->check(CLI::PositiveNumber);

    auto* separation = app.add_subcommand("separation", "overlap multiplicity and identity-limit decay");
    add_common(separation, c);
    separation->add_option("--depth", c.depth, "number of grid scales")->check(CLI::PositiveNumber);
    separation->add_option("--theta-fail", sep.theta_fail, "failing threshold")->check(CLI::PositiveNumber);
    separation->add_option("--theta-hold", sep.theta_hold, "holding threshold")->check(CLI::PositiveNumber);

    auto* dimension = app.add_subcommand("dimension", "box, Bowen and Assouad estimates");
    add_common(dimension, c);
    dimension->add_option("--method", method, "box|bowen|assouad|all")
        ->check(CLI::IsMember({"box", "bowen", "assouad", "all"}));
    dimension->add_option("--depth", c.depth, "Bowen word length")->check(CLI::PositiveNumber);
    dimension->add_option("--decades", decades, "Assouad ratio decades")->check(CLI::PositiveNumber);

    auto* tangent = app.add_subcommand("tangent", "zoom construction at x1");
    add_common(tangent, c);
    tangent->add_option("--i", tangent_i, "target precision 1/i")->check(CLI::PositiveNumber);
    tangent->add_option("--depth", c.depth, "pair search depth")->check(CLI::PositiveNumber);
    tangent->add_option("--m-max", tp.m_max, "largest f1 power per step")->check(CLI::NonNegativeNumber);
    tangent->add_option("--window-lo", tp.window_lo, "lower window edge as a fraction of 1/i")
        ->check(CLI::Range(1e-6, 1.0));

    auto* report = app.add_subcommand("report", "full dichotomy report");
    add_common(report, c);
    report->add_option("--depth", c.depth, "separation depth")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "UsageError", e.what());
        return kExitValidation;
    }

    std::ostringstream buf;
    int code = kExitOk;
    try {
        if (*validate) code = cmd_validate(c, buf);
        else if (*cylinders) code = cmd_cylinders(c, cyl_b, buf);
        else if (*separation) code = cmd_separation(c, sep, buf);
        else if (*dimension) code = cmd_dimension(c, method, decades, buf);
        else if (*tangent) code = cmd_tangent(c, tangent_i, tp, buf);
        else code = cmd_report(c, buf);
    } catch (const Error& e) {
        write_error(err, kind_name(e.kind()), e.what(), e.index());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        write_error(err, "InternalError", e.what());
        return kExitComputation;
    }

    if (c.output.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(c.output, std::ios::binary);
        f << buf.str();
        if (!f) {
            write_error(err, "OutputError", "cannot write " + c.output);
            return kExitValidation;
        }
    }
    return code;
}

}  // namespace confdim::cli
