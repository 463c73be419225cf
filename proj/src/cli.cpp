#include "mixloci/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixloci/loci.hpp"
#include "mixloci/mixing.hpp"
#include "mixloci/state_io.hpp"

namespace mixloci::cli {

using nlohmann::json;

namespace {

struct GlobalOptions {
    double tol_rank = ToleranceConfig{}.rank_rel_tol;
    double tol_floor = ToleranceConfig{}.abs_floor;

    ToleranceConfig tolerances() const { return {tol_rank, tol_floor}; }
};

struct LoadedState {
    std::string path;
    std::string digest;
    StateDocument doc;
};

LoadedState load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open state file " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, "malformed JSON in " + path + ": " + e.what());
    }
    return {path, content_digest(bytes), parse_state(doc)};
}

json file_entry(const LoadedState& s) { return {{"path", s.path}, {"digest", s.digest}}; }

Side parse_side(const std::string& s) { return s == "B" || s == "b" ? Side::B : Side::A; }
const char* side_name(Side s) { return s == Side::A ? "A" : "B"; }

std::string format_complex(cplx z)
{
    char buf[64];
    const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
    if (im == 0.0)
        std::snprintf(buf, sizeof buf, "%.6g", re);
    else
        std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
    return buf;
}

std::string format_point(const ProjectivePoint& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (i) s += " : ";
        s += format_complex(p[i]);
    }
    return s + ")";
}

json report(const std::string& command, json inputs, const std::string& verdict, json data, std::uint64_t seed,
            const ToleranceConfig& tol)
{
    return {{"command", command},
            {"inputs", std::move(inputs)},
            {"verdict", verdict},
            {"data", std::move(data)},
            {"seed", seed},
            {"tolerances", {{"rank_rel_tol", tol.rank_rel_tol}, {"abs_floor", tol.abs_floor}}}};
}

const char* kind_name(EmptinessKind k)
{
    switch (k) {
    case EmptinessKind::EmptyExact: return "EMPTY_EXACT";
    case EmptinessKind::NonemptyWitness: return "NONEMPTY_WITNESS";
    case EmptinessKind::EmptyHeuristic: return "EMPTY_HEURISTIC";
    }
    return "?";
}

void require_distribution(const std::vector<double>& w, const char* what)
{
    if (w.empty()) throw Error(ErrorCode::InvalidInput, std::string(what) + " list is empty");
    double total = 0.0;
    for (double x : w) {
        if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be positive");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidInput, std::string(what) + " sum to " + std::to_string(total) + ", expected 1");
}

std::vector<double> renormalized(std::vector<double> w)
{
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return w;
}

json doubles(const std::vector<double>& v) { return json(v); }

// ---------------------------------------------------------------------------
// locus

struct LocusArgs {
    std::string state;
    std::string side = "A";
    std::size_t k = 0;
    std::size_t starts = SamplerConfig{}.starts;
    std::uint64_t seed = 0;
    bool json_out = false;
};

int cmd_locus(const LocusArgs& a, const GlobalOptions& g, std::ostream& out)
{
    const ToleranceConfig tol = g.tolerances();
    const LoadedState st = load(a.state);
    const Side side = parse_side(a.side);
    const Pencil pencil = pencil_from_density(st.doc.density(), side, tol);
    if (a.k > pencil.block_rows())
        throw Error(ErrorCode::InvalidK, "k must not exceed " + std::to_string(pencil.block_rows()));

    json inputs = {{"files", {{"state", file_entry(st)}}},
                   {"flags", {{"side", side_name(side)}, {"k", a.k}, {"starts", a.starts}}}};
    json data = {{"k", a.k}, {"side", side_name(side)}, {"ambient_dim", pencil.ambient_dim()}};
    std::string verdict;
    std::ostringstream text;

    if (a.k == 0) {
        const LinearLocus locus = locus_zero(pencil, tol);
        verdict = locus.empty() ? "EMPTY" : "NONEMPTY";
        json basis = json::array();
        for (const auto& p : locus.basis_points()) basis.push_back(point_to_json(p));
        data["method"] = "exact";
        data["projective_dimension"] = locus.projective_dimension;
        data["basis"] = basis;
        text << "V_" << side_name(side) << "^0 (exact): ";
        if (locus.empty()) {
            text << "empty, projective dimension -1\n";
        } else {
            text << "projective dimension " << locus.projective_dimension << ", spanned by\n";
            for (const auto& p : locus.basis_points()) text << "  " << format_point(p) << "\n";
        }
    } else {
        SamplerConfig cfg;
        cfg.starts = a.starts;
        cfg.seed = a.seed;
        const LocusSample sample = sample_locus(pencil, a.k, cfg, tol);
        json pts = json::array();
        for (const auto& lp : sample.points) {
            pts.push_back({{"coords", point_to_json(lp.point)},
                           {"residual", lp.residual},
                           {"threshold", lp.threshold},
                           {"rank", rank_at(pencil, lp.point, tol)},
                           {"local_dimension", local_dimension(pencil, a.k, lp.point, tol)}});
        }
        verdict = sample.trivial ? "WHOLE_SPACE" : (sample.points.empty() ? "NONE_FOUND" : "NONEMPTY");
        data["method"] = "sampled";
        data["points"] = pts;
        data["starts"] = sample.starts;
        data["converged"] = sample.converged;
        data["min_residual"] = sample.min_residual;
        data["clustered"] = sample.clustered;
        data["trivial"] = sample.trivial;
        text << "V_" << side_name(side) << "^" << a.k << " (sampled, " << sample.starts << " starts): ";
        if (sample.trivial) {
            text << "whole space\n";
        } else if (sample.points.empty()) {
            text << "no point found (smallest residual " << sample.min_residual << "); not a proof of emptiness\n";
        } else {
            text << sample.points.size() << " distinct point(s) from " << sample.converged << " converged start(s)\n";
            for (const auto& lp : sample.points)
                text << "  " << format_point(lp.point) << "  residual " << lp.residual << "\n";
        }
    }

    if (a.json_out)
        out << report("locus", inputs, verdict, data, a.seed, tol).dump(2) << "\n";
    else
        out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check-mix

struct CheckMixArgs {
    std::string target;
    std::string component;
    std::string side = "A";
    std::string k = "all";
    std::size_t starts = SamplerConfig{}.starts;
    std::uint64_t seed = 0;
    bool json_out = false;
};

int cmd_check_mix(const CheckMixArgs& a, const GlobalOptions& g, std::ostream& out)
{
    const ToleranceConfig tol = g.tolerances();
    const LoadedState target = load(a.target);
    const LoadedState component = load(a.component);
    const Side side = parse_side(a.side);
    std::optional<std::size_t> k;
    if (a.k != "all") {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(a.k, &pos);
            if (pos != a.k.size() || v < 0) throw std::invalid_argument(a.k);
            k = static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::InvalidInput, "--k must be a nonnegative integer or 'all'");
        }
    }

    SamplerConfig cfg;
    cfg.starts = a.starts;
    cfg.seed = a.seed;
    const DensityMatrix rho_target = target.doc.density();
    const DensityMatrix rho_component = component.doc.density();
    const ComponentVerdict verdict = check_component_necessary(rho_target, rho_component, side, k, cfg, tol);

    json inputs = {{"files", {{"target", file_entry(target)}, {"component", file_entry(component)}}},
                   {"flags", {{"side", side_name(side)}, {"k", a.k}, {"starts", a.starts}}}};
    json data;
    std::string verdict_name;
    std::ostringstream text;
    if (const auto* inf = std::get_if<Infeasible>(&verdict)) {
        const MixCertificate& c = inf->certificate;
        verdict_name = "INFEASIBLE";
        data = {{"certificate",
                 {{"witness", point_to_json(c.witness)},
                  {"side", side_name(c.side)},
                  {"k", c.k},
                  {"rank_in_target", c.rank_in_target},
                  {"rank_in_component", c.rank_in_component},
                  {"target_residual", c.target_residual},
                  {"target_threshold", c.target_threshold},
                  {"component_residual", c.component_residual},
                  {"component_threshold", c.component_threshold},
                  {"verified", verify_certificate(rho_target, rho_component, c, tol)}}}};
        text << "INFEASIBLE: the component cannot appear in any mixture equal to the target\n"
             << "  witness " << format_point(c.witness) << " lies in V_" << side_name(c.side) << "^" << c.k
             << "(target) (rank " << c.rank_in_target << ") but not in V_" << side_name(c.side) << "^" << c.k
             << "(component) (rank " << c.rank_in_component << ")\n";
    } else {
        const auto& stats = std::get<NoObstructionFound>(verdict).stats;
        verdict_name = "NO_OBSTRUCTION_FOUND";
        data = {{"ranks_scanned", stats.ranks_scanned},
                {"candidates_examined", stats.candidates_examined},
                {"empty_target_loci", stats.empty_target_loci}};
        text << "NO_OBSTRUCTION_FOUND after examining " << stats.candidates_examined
             << " candidate point(s); this does not prove the mixture exists\n";
    }

    if (a.json_out)
        out << report("check-mix", inputs, verdict_name, data, a.seed, tol).dump(2) << "\n";
    else
        out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
    std::string state;
    bool json_out = false;
};

int cmd_bounds(const BoundsArgs& a, const GlobalOptions& g, std::ostream& out)
{
    const ToleranceConfig tol = g.tolerances();
    const LoadedState st = load(a.state);
    const DensityMatrix rho = st.doc.density();
    const SchmidtRankCaps caps = schmidt_rank_caps(rho, tol);
    const bool separable = forces_separable(rho, tol);
    const bool excludes = excludes_max_schmidt_rank(rho, tol);

    json data = {{"side_a", {{"v0_dimension", caps.dim_a}, {"cap", caps.cap_a}}},
                 {"side_b", {{"v0_dimension", caps.dim_b}, {"cap", caps.cap_b}}},
                 {"schmidt_rank_cap", caps.combined},
                 {"forces_separable", separable},
                 {"excludes_max_schmidt_rank", excludes}};
    const std::string verdict = separable ? "SEPARABLE_FORCED" : (excludes ? "MAX_RANK_EXCLUDED" : "NO_RESTRICTION");
    if (a.json_out) {
        out << report("bounds", {{"files", {{"state", file_entry(st)}}}, {"flags", json::object()}}, verdict, data, 0, tol)
                   .dump(2)
            << "\n";
    } else {
        out << "dim V_A^0 = " << caps.dim_a << ", Schmidt rank cap from side A: " << caps.cap_a << "\n"
            << "dim V_B^0 = " << caps.dim_b << ", Schmidt rank cap from side B: " << caps.cap_b << "\n"
            << "Schmidt rank cap: " << caps.combined << "\n"
            << "forces separable: " << (separable ? "true" : "false") << "\n"
            << "excludes maximal Schmidt rank: " << (excludes ? "true" : "false") << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// majorize

struct MajorizeArgs {
    std::vector<double> probs;
    std::string target;
    std::vector<std::string> components;
    std::vector<double> weights;
    bool reduced = false;
    bool json_out = false;
};

int cmd_majorize(const MajorizeArgs& a, const GlobalOptions& g, std::ostream& out)
{
    const ToleranceConfig tol = g.tolerances();
    const LoadedState target = load(a.target);
    const DensityMatrix rho = target.doc.density();
    const bool pure_mode = !a.probs.empty();
    if (pure_mode == !a.components.empty())
        throw Error(ErrorCode::InvalidInput, "give either --p or --components with --weights");

    json files = {{"target", file_entry(target)}};
    json flags = {{"reduced", a.reduced}};
    json data;
    bool pass = true;
    std::ostringstream text;
    if (pure_mode) {
        require_distribution(a.probs, "probabilities");
        const auto probs = renormalized(a.probs);
        pass = check_pure_mix_eigen(rho, probs);
        flags["p"] = a.probs;
        data = {{"mode", "pure"}, {"probabilities", doubles(probs)}, {"target_spectrum", doubles(spectrum(rho))},
                {"majorized", pass}};
        text << "probabilities majorized by the target spectrum: " << (pass ? "pass" : "fail") << "\n";
    } else {
        if (a.weights.size() != a.components.size())
            throw Error(ErrorCode::InvalidInput, "need one weight per component");
        require_distribution(a.weights, "weights");
        const auto weights = renormalized(a.weights);
        std::vector<WeightedState> comps;
        json comp_files = json::array();
        for (std::size_t i = 0; i < a.components.size(); ++i) {
            const LoadedState c = load(a.components[i]);
            comp_files.push_back(file_entry(c));
            comps.push_back({weights[i], c.doc.density()});
        }
        files["components"] = comp_files;
        flags["weights"] = a.weights;
        const bool spectral = check_mixed_mix_eigen(rho, comps);
        data = {{"mode", "mixed"}, {"spectral", spectral}};
        text << "target spectrum majorized by the weighted component spectra: " << (spectral ? "pass" : "fail") << "\n";
        pass = spectral;
        if (a.reduced) {
            const bool reduced = check_reduced_constraints(rho, comps);
            data["reduced"] = reduced;
            text << "same constraint on both reduced states: " << (reduced ? "pass" : "fail") << "\n";
            pass = pass && reduced;
        }
    }
    if (a.json_out)
        out << report("majorize", {{"files", files}, {"flags", flags}}, pass ? "PASS" : "FAIL", data, 0, tol).dump(2)
            << "\n";
    else
        out << text.str() << (pass ? "PASS" : "FAIL") << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// genericity

struct GenericityArgs {
    GenericityQuery query;
    std::size_t starts = SamplerConfig{}.starts;
    bool json_out = false;
};

int cmd_genericity(const GenericityArgs& a, const GlobalOptions& g, std::ostream& out)
{
    const ToleranceConfig tol = g.tolerances();
    const GenericityQuery& q = a.query;
    if (q.m < 1 || q.n < 1 || q.r < 1 || q.r > q.m * q.n)
        throw Error(ErrorCode::ParameterOutOfRange, "need m, n >= 1 and 1 <= r <= m*n");
    SamplerConfig cfg;
    cfg.starts = a.starts;
    const GenericityReport rep = monte_carlo_genericity(q, cfg, tol);

    json data = {{"m", q.m},
                 {"n", q.n},
                 {"r", q.r},
                 {"t", q.t},
                 {"trials", q.trials},
                 {"predicate", rep.predicate_holds},
                 {"codimension", rep.codimension},
                 {"nonempty_count", rep.nonempty_count},
                 {"nonempty_fraction", rep.nonempty_fraction ? json(*rep.nonempty_fraction) : json(nullptr)},
                 {"fraction_undefined", !rep.nonempty_fraction.has_value()}};
    if (rep.residuals) {
        data["residuals"] = {{"min", rep.residuals->min},
                             {"median", rep.residuals->median},
                             {"max", rep.residuals->max},
                             {"min_margin", rep.residuals->min_margin ? json(*rep.residuals->min_margin) : json(nullptr)}};
    } else {
        data["residuals"] = nullptr;
    }
    json kinds = json::array();
    for (const auto& rec : rep.records) kinds.push_back(kind_name(rec.kind));
    data["trial_verdicts"] = kinds;

    const std::string verdict = rep.predicate_holds ? "GENERICALLY_EMPTY" : "NOT_GENERICALLY_EMPTY";
    if (a.json_out) {
        json flags = {{"m", q.m}, {"n", q.n}, {"r", q.r}, {"t", q.t}, {"trials", q.trials}, {"starts", a.starts}};
        out << report("genericity", {{"files", json::object()}, {"flags", flags}}, verdict, data, q.seed, tol).dump(2)
            << "\n";
    } else {
        out << "predicate (n-t)(r-t) >= m: " << (rep.predicate_holds ? "true" : "false") << "\n"
            << "codimension: " << rep.codimension << "\n";
        if (rep.nonempty_fraction) {
            out << "nonempty fraction: " << *rep.nonempty_fraction << " (" << rep.nonempty_count << "/" << q.trials
                << ")\n";
        } else {
            out << "nonempty fraction: undefined (no trials)\n";
        }
        if (rep.residuals) {
            out << "minimized residuals without witness: min " << rep.residuals->min << ", median "
                << rep.residuals->median << ", max " << rep.residuals->max << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Degeneracy loci of bipartite mixed states and necessary conditions for mixing", "mixloci"};
    GlobalOptions global;
    app.add_option("--tol-rank", global.tol_rank, "Relative rank tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--tol-floor", global.tol_floor, "Absolute rank threshold floor")->check(CLI::NonNegativeNumber);
    app.require_subcommand(1);

    const auto sides = CLI::IsMember({"A", "B"});

    LocusArgs locus;
    auto* locus_cmd = app.add_subcommand("locus", "Compute V^k of a state on one side");
    locus_cmd->add_option("--state", locus.state, "State file")->required();
    locus_cmd->add_option("--side", locus.side, "A or B")->check(sides);
    locus_cmd->add_option("--k", locus.k, "Rank bound");
    locus_cmd->add_option("--starts", locus.starts, "Multistart count for k >= 1");
    locus_cmd->add_option("--seed", locus.seed, "Master seed");
    locus_cmd->add_flag("--json", locus.json_out, "Emit a JSON report");

    CheckMixArgs check;
    auto* check_cmd = app.add_subcommand("check-mix", "Search for a locus obstruction to a mixing component");
    check_cmd->add_option("--target", check.target, "Target state file")->required();
    check_cmd->add_option("--component", check.component, "Candidate component state file")->required();
    check_cmd->add_option("--side", check.side, "A or B")->check(sides);
    check_cmd->add_option("--k", check.k, "Rank bound, or 'all'");
    check_cmd->add_option("--starts", check.starts, "Multistart count");
    check_cmd->add_option("--seed", check.seed, "Master seed");
    check_cmd->add_flag("--json", check.json_out, "Emit a JSON report");

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "Schmidt-rank caps from the exact V^0 loci");
    bounds_cmd->add_option("--state", bounds.state, "State file")->required();
    bounds_cmd->add_flag("--json", bounds.json_out, "Emit a JSON report");

    MajorizeArgs maj;
    auto* maj_cmd = app.add_subcommand("majorize", "Eigenvalue majorization constraints");
    maj_cmd->add_option("--p", maj.probs, "Probabilities of a pure-state decomposition")->delimiter(',');
    maj_cmd->add_option("--target", maj.target, "Target state file")->required();
    maj_cmd->add_option("--components", maj.components, "Component state files")->delimiter(',');
    maj_cmd->add_option("--weights", maj.weights, "Component weights")->delimiter(',');
    maj_cmd->add_flag("--reduced", maj.reduced, "Also check both reduced states");
    maj_cmd->add_flag("--json", maj.json_out, "Emit a JSON report");

    GenericityArgs gen;
    auto* gen_cmd = app.add_subcommand("genericity", "Monte-Carlo check of generic emptiness of V_A^t");
    gen_cmd->add_option("--m", gen.query.m, "Dimension of side A")->required();
    gen_cmd->add_option("--n", gen.query.n, "Dimension of side B")->required();
    gen_cmd->add_option("--r", gen.query.r, "Rank of the random states")->required();
    gen_cmd->add_option("--t", gen.query.t, "Locus rank bound")->required();
    gen_cmd->add_option("--trials", gen.query.trials, "Number of random states");
    gen_cmd->add_option("--seed", gen.query.seed, "Master seed");
    gen_cmd->add_option("--starts", gen.starts, "Multistart count per trial");
    gen_cmd->add_flag("--json", gen.json_out, "Emit a JSON report");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (locus_cmd->parsed()) return cmd_locus(locus, global, out);
        if (check_cmd->parsed()) return cmd_check_mix(check, global, out);
        if (bounds_cmd->parsed()) return cmd_bounds(bounds, global, out);
        if (maj_cmd->parsed()) return cmd_majorize(maj, global, out);
        if (gen_cmd->parsed()) return cmd_genericity(gen, global, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace mixloci::cli
