#ifndef CORRGEO_CLI_HPP
#define CORRGEO_CLI_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrgeo/elliptope.hpp"
#include "corrgeo/error.hpp"
#include "corrgeo/events.hpp"
#include "corrgeo/json_io.hpp"
#include "corrgeo/polytope.hpp"
#include "corrgeo/quantum.hpp"
#include "corrgeo/raffles.hpp"

namespace corrgeo::cli {

using json = nlohmann::json;

inline constexpr const char* version = "0.1.0";

enum ExitCode : int { Success = 0, NegativeVerdict = 1, InputError = 2 };

/// What one invocation produced. `report` is absent for help text and for
/// CSV output; `diagnostic` is the single stderr line of a failed run.
struct RunResult {
    int exit_code = Success;
    std::optional<json> report;
    std::string output;
    std::string diagnostic;
};

namespace detail {

/// Shortest text that reads back as the same double.
inline std::string format_double(double x)
{
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

inline double round_to_1e12(double x)
{
    const double r = std::round(x * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}

inline std::vector<std::string> split_commas(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(item);
    if (!text.empty() && text.back() == ',') out.emplace_back();
    return out;
}

inline RVector parse_exact_point(const std::string& text)
{
    RVector out;
    for (const auto& item : split_commas(text)) out.push_back(parse_rational(item));
    if (out.empty()) fail(ErrorKind::ParseError, "empty point");
    return out;
}

inline std::vector<double> parse_double_list(const std::string& text, std::size_t expected, const char* what)
{
    std::vector<double> out;
    for (const auto& item : split_commas(text)) out.push_back(to_double(parse_rational(item)));
    if (out.size() != expected) {
        fail(ErrorKind::DimensionMismatch, std::string(what) + " needs " + std::to_string(expected) + " comma-separated values, got " + std::to_string(out.size()));
    }
    return out;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ParseError, "'" + path + "' is not valid JSON (byte " + std::to_string(e.byte) + ")");
    }
}

inline std::string mesh_csv(const std::vector<CorrelationTriple>& mesh)
{
    std::string out = "chi_ab,chi_ac,chi_bc\n";
    for (const auto& t : mesh) out += format_double(t.chi_ab) + "," + format_double(t.chi_ac) + "," + format_double(t.chi_bc) + "\n";
    return out;
}

inline json mesh_json(const std::vector<CorrelationTriple>& mesh)
{
    json rows = json::array();
    for (const auto& t : mesh) rows.push_back({t.chi_ab, t.chi_ac, t.chi_bc});
    return rows;
}

inline std::array<Rational, 3> as_chi(const RVector& p)
{
    if (p.size() != 3) fail(ErrorKind::DimensionMismatch, "a correlation point has three components (chi_ab,chi_ac,chi_bc)");
    return {p[0], p[1], p[2]};
}

/// Raffle polytope with every vertex checked against the elliptope exactly.
inline json raffle_figure(int spin2)
{
    const BalancedValueSet vs(spin2);
    const VPolytope v = raffle_polytope(vs);
    for (const auto& p : v.vertices()) {
        if (elliptope_value_exact(as_chi(p)).sign() < 0) fail(ErrorKind::NotInElliptope, "raffle vertex outside the elliptope");
    }
    return {{"spin2", spin2}, {"vertices", io::to_json(v)}, {"facets", io::to_json(raffle_facets(vs))}, {"inside_elliptope", true}};
}

struct Options {
    std::string format;
    bool timing = false;

    std::string event_file;  // vertices, facets
    std::string polytope_file;
    std::string point;
    int resolution = 64;
    int spin2 = 0;
    std::string angles;
    std::string raffle_file;
    std::uint64_t n_draws = 1000000;
    std::optional<std::uint64_t> seed;
    std::size_t shards = 1;
    std::string figure;
};

struct Outcome {
    json result;
    int exit_code = Success;
    std::optional<std::string> csv;
    std::optional<std::uint64_t> seed;
    json files = json::object();
};

inline void require_format(const Options& o, bool csv_allowed)
{
    if (o.format == "csv" && !csv_allowed) fail(ErrorKind::ParseError, "--format csv is not available for this command");
}

inline Outcome cmd_vertices(const Options& o)
{
    require_format(o, true);
    Outcome out;
    const json input = read_json_file(o.event_file);
    out.files[o.event_file] = input;
    const EventSystem sys = io::event_system_from_json(input);
    const auto verts = enumerate_vertices(sys);
    json rows = json::array();
    std::string csv;
    for (const auto& v : verts) {
        json row = json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            row.push_back(std::to_string(v[i]));
            csv += (i ? "," : "") + std::to_string(v[i]);
        }
        csv += "\n";
        rows.push_back(row);
    }
    out.result = {{"dim", sys.dim()}, {"count", verts.size()}, {"vertices", rows}};
    if (o.format == "csv") out.csv = csv;
    return out;
}

inline Outcome cmd_facets(const Options& o)
{
    require_format(o, false);
    Outcome out;
    const json input = read_json_file(o.event_file);
    out.files[o.event_file] = input;
    HPolytope h;
    io::RationalStyle style = io::RationalStyle::Fraction;
    if (input.is_object() && input.contains("atoms")) {
        h = boole_conditions(io::event_system_from_json(input));
        style = io::RationalStyle::Integer;
    } else {
        h = facets(io::vpolytope_from_json(input));
    }
    out.result = io::to_json(h, style);
    out.result["count"] = h.size();
    return out;
}

inline Outcome cmd_member(const Options& o)
{
    require_format(o, false);
    Outcome out;
    const json input = read_json_file(o.polytope_file);
    out.files[o.polytope_file] = input;
    const RVector x = parse_exact_point(o.point);
    json result;
    HPolytope h;
    std::optional<VPolytope> v;
    if (input.is_object() && input.contains("vertices")) {
        v = io::vpolytope_from_json(input);
        h = facets(*v);
    } else {
        h = io::hpolytope_from_json(input);
    }
    const ContainsResult c = contains(h, x);
    result["verdict"] = to_string(c.verdict);
    json violated = json::array();
    for (auto i : c.violated) violated.push_back(io::halfspace_to_json(h.halfspaces()[i]));
    result["violated"] = violated;
    if (v) {
        const MembershipCertificate cert = lp_membership(*v, x);
        json certificate = {{"member", cert.member}};
        if (cert.member) certificate["weights"] = io::vector_to_json(cert.weights);
        if (cert.separator) certificate["separator"] = io::halfspace_to_json(*cert.separator);
        result["certificate"] = certificate;
    }
    out.result = result;
    out.exit_code = c.verdict == Membership::Outside ? NegativeVerdict : Success;
    return out;
}

inline Outcome cmd_elliptope_check(const Options& o)
{
    require_format(o, false);
    const auto p = parse_double_list(o.point, 3, "--point");
    const CorrelationTriple t{p[0], p[1], p[2]};
    const ElliptopeVerdict verdict = is_in_elliptope(t);
    Outcome out;
    out.result = {{"verdict", to_string(verdict)}, {"value", elliptope_value(t)}};
    out.exit_code = verdict == ElliptopeVerdict::Outside ? NegativeVerdict : Success;
    return out;
}

inline Outcome cmd_elliptope_mesh(const Options& o)
{
    require_format(o, true);
    if (o.resolution < 2) fail(ErrorKind::DimensionMismatch, "--resolution must be at least 2");
    const auto mesh = boundary_mesh(static_cast<std::size_t>(o.resolution));
    Outcome out;
    out.result = {{"resolution", o.resolution}, {"columns", {"chi_ab", "chi_ac", "chi_bc"}}, {"points", mesh_json(mesh)}};
    if (o.format == "csv") out.csv = mesh_csv(mesh);
    return out;
}

inline Outcome cmd_quantum_chi(const Options& o)
{
    require_format(o, true);
    const auto deg = parse_double_list(o.angles, 3, "--angles");
    constexpr double pi = 3.14159265358979323846;
    CorrelationTriple target{};
    std::array<double, 3> cosines{};
    for (std::size_t i = 0; i < 3; ++i) cosines[i] = std::cos(deg[i] * pi / 180.0);
    target = {cosines[0], cosines[1], cosines[2]};
    const auto dirs = saturate(target, o.spin2);
    const CorrelationTriple chi = chi_triple(o.spin2, dirs);
    const std::array<double, 3> rounded{round_to_1e12(chi.chi_ab), round_to_1e12(chi.chi_ac), round_to_1e12(chi.chi_bc)};
    Outcome out;
    json directions = json::array();
    for (const auto& d : dirs) directions.push_back({round_to_1e12(d[0]), round_to_1e12(d[1]), round_to_1e12(d[2])});
    out.result = {{"spin2", o.spin2}, {"angles_deg", deg}, {"chi", rounded}, {"directions", directions}};
    if (o.format == "csv") {
        static constexpr const char* pairs[] = {"ab", "ac", "bc"};
        std::string csv = "pair,angle_deg,chi\n";
        for (std::size_t i = 0; i < 3; ++i) csv += std::string(pairs[i]) + "," + format_double(deg[i]) + "," + format_double(rounded[i]) + "\n";
        out.csv = csv;
    }
    return out;
}

inline Outcome cmd_raffle_polytope(const Options& o)
{
    require_format(o, false);
    Outcome out;
    const BalancedValueSet vs(o.spin2);
    const VPolytope v = raffle_polytope(vs);
    const HPolytope h = raffle_facets(vs);
    json inequalities = json::array();
    for (const auto& f : h.halfspaces()) inequalities.push_back(chi_inequality_string(f));
    out.result = {{"spin2", o.spin2}, {"vertices", io::to_json(v)}, {"facets", io::to_json(h)}, {"inequalities", inequalities}};
    return out;
}

inline Outcome cmd_raffle_feasible(const Options& o)
{
    require_format(o, false);
    const auto chi = as_chi(parse_exact_point(o.point));
    const FeasibilityCertificate cert = feasible(BalancedValueSet(o.spin2), chi);
    Outcome out;
    json result = {{"spin2", o.spin2}, {"point", io::vector_to_json(RVector(chi.begin(), chi.end()))}};
    result["verdict"] = cert.feasible ? "feasible" : "infeasible";
    if (cert.witness) result["witness"] = io::to_json(*cert.witness);
    if (cert.facet) {
        result["facet"] = chi_inequality_string(*cert.facet);
        result["halfspace"] = io::halfspace_to_json(*cert.facet);
    }
    out.result = result;
    out.exit_code = cert.feasible ? Success : NegativeVerdict;
    return out;
}

inline Outcome cmd_raffle_simulate(const Options& o)
{
    require_format(o, false);
    Outcome out;
    std::optional<Raffle> raffle;
    if (!o.raffle_file.empty()) {
        const json input = read_json_file(o.raffle_file);
        out.files[o.raffle_file] = input;
        raffle = io::raffle_from_json(input);
        if (o.spin2 != 0 && o.spin2 != raffle->value_set().spin2()) fail(ErrorKind::DimensionMismatch, "--spin disagrees with the raffle file");
    } else {
        if (o.point.empty()) fail(ErrorKind::ParseError, "raffle simulate needs --raffle FILE or --point");
        const auto chi = as_chi(parse_exact_point(o.point));
        const FeasibilityCertificate cert = feasible(BalancedValueSet(o.spin2), chi);
        if (!cert.feasible) {
            out.result = {{"verdict", "infeasible"}, {"facet", chi_inequality_string(*cert.facet)}, {"halfspace", io::halfspace_to_json(*cert.facet)}};
            out.exit_code = NegativeVerdict;
            return out;
        }
        raffle = *cert.witness;
    }
    std::uint64_t seed = 0;
    if (o.seed) {
        seed = *o.seed;
    } else if (const char* env = std::getenv("CORRGEO_SEED")) {
        const std::string text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
        if (ec != std::errc() || ptr != text.data() + text.size()) fail(ErrorKind::ParseError, "CORRGEO_SEED must be an unsigned 64-bit integer");
    }
    out.seed = seed;
    const SimulationReport report = simulate(*raffle, o.n_draws, seed, o.shards);
    const auto exact = chi_of_raffle_exact(*raffle);
    out.result = {{"raffle", io::to_json(*raffle)},
                  {"exact_chi", io::vector_to_json(RVector(exact.begin(), exact.end()))},
                  {"simulation", io::to_json(report, raffle->value_set())}};
    return out;
}

inline Outcome cmd_figure(const Options& o)
{
    Outcome out;
    if (o.figure == "elliptope") {
        require_format(o, true);
        const auto mesh = boundary_mesh(64);
        out.result = {{"figure", "elliptope"}, {"columns", {"chi_ab", "chi_ac", "chi_bc"}}, {"points", mesh_json(mesh)}};
        if (o.format != "json") out.csv = mesh_csv(mesh);
        return out;
    }
    require_format(o, false);
    if (o.figure == "tetrahedron") {
        out.result = raffle_figure(1);
        out.result["figure"] = "tetrahedron";
        return out;
    }
    if (o.figure == "spin1") {
        out.result = raffle_figure(2);
        out.result["figure"] = "spin1";
        return out;
    }
    fail(ErrorKind::UnknownFigure, "unknown figure '" + o.figure + "' (expected elliptope, tetrahedron or spin1)");
}

} // namespace detail

/// Parses `args` (without the program name), runs one subcommand and renders
/// its output. Never throws.
inline RunResult run(const std::vector<std::string>& args)
{
    using namespace detail;
    RunResult rr;
    Options o;

    CLI::App app{"corrgeo: correlation polytopes, the elliptope, spin-s raffles and singlet correlations", "corrgeo"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", version);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", o.timing, "Add wall time (ms) to the report metadata");

    auto* vertices_cmd = app.add_subcommand("vertices", "0/1 vertices of an event system JSON file");
    vertices_cmd->add_option("file", o.event_file, "Event system {\"atoms\": n, \"derived\": [...]}")->required();

    auto* facets_cmd = app.add_subcommand("facets", "Facet inequalities a.x + a0 >= 0 of an event system or vertex file");
    facets_cmd->add_option("file", o.event_file, "Event system or {\"dim\", \"vertices\"} JSON")->required();

    auto* member_cmd = app.add_subcommand("member", "Membership verdict with certificate");
    member_cmd->add_option("--polytope", o.polytope_file, "Polytope JSON (vertices or halfspaces)")->required();
    member_cmd->add_option("--point", o.point, "Comma-separated exact coordinates, e.g. 1/2,0,-0.25")->required();

    auto* elliptope_cmd = app.add_subcommand("elliptope", "Elliptope membership and boundary mesh");
    elliptope_cmd->require_subcommand(1, 1);
    auto* check_cmd = elliptope_cmd->add_subcommand("check", "Classify a triple chi_ab,chi_ac,chi_bc");
    check_cmd->add_option("--point", o.point, "chi_ab,chi_ac,chi_bc")->required();
    auto* mesh_cmd = elliptope_cmd->add_subcommand("mesh", "Boundary points over an N x N grid");
    mesh_cmd->add_option("--resolution", o.resolution, "Grid size N (default 64)");

    auto* quantum_cmd = app.add_subcommand("quantum", "Spin-s singlet correlations");
    quantum_cmd->require_subcommand(1, 1);
    auto* chi_cmd = quantum_cmd->add_subcommand("chi", "Anti-correlations for directions at the given mutual angles");
    chi_cmd->add_option("--spin", o.spin2, "2s (1 = spin 1/2)")->required();
    chi_cmd->add_option("--angles", o.angles, "theta_ab,theta_ac,theta_bc in degrees")->required();

    auto* raffle_cmd = app.add_subcommand("raffle", "Local hidden-variable raffles over spin-s value sets");
    raffle_cmd->require_subcommand(1, 1);
    auto* rpoly_cmd = raffle_cmd->add_subcommand("polytope", "Vertices and facets of the raffle polytope");
    rpoly_cmd->add_option("--spin", o.spin2, "2s (1 = spin 1/2)")->required();
    auto* feasible_cmd = raffle_cmd->add_subcommand("feasible", "Exact raffle for a chi triple, or a violated facet");
    feasible_cmd->add_option("--spin", o.spin2, "2s (1 = spin 1/2)")->required();
    feasible_cmd->add_option("--point", o.point, "chi_ab,chi_ac,chi_bc (exact: -1/2 or -0.5)")->required();
    auto* simulate_cmd = raffle_cmd->add_subcommand("simulate", "Monte Carlo run of a raffle");
    simulate_cmd->add_option("--spin", o.spin2, "2s; required with --point");
    simulate_cmd->add_option("--point", o.point, "Simulate the exact witness raffle for this chi triple");
    simulate_cmd->add_option("--raffle", o.raffle_file, "Raffle JSON {\"spin2\", \"tickets\"}");
    simulate_cmd->add_option("--n", o.n_draws, "Number of draws (default 1000000)")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", o.seed, "64-bit seed (fallback: CORRGEO_SEED, then 0)");
    simulate_cmd->add_option("--shards", o.shards, "Worker threads; totals do not depend on it")->check(CLI::Range(1, 256));

    auto* figure_cmd = app.add_subcommand("figure", "Data behind the figures: elliptope (CSV), tetrahedron, spin1");
    figure_cmd->add_option("name", o.figure, "elliptope | tetrahedron | spin1")->required();

    json echo = {{"argv", args}};
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        rr.output = app.help();
        return rr;
    } catch (const CLI::CallForAllHelp&) {
        rr.output = app.help("", CLI::AppFormatMode::All);
        return rr;
    } catch (const CLI::CallForVersion&) {
        rr.output = std::string(version) + "\n";
        return rr;
    } catch (const CLI::ParseError& e) {
        rr.exit_code = InputError;
        std::string msg = e.what();
        msg.erase(std::remove(msg.begin(), msg.end(), '\n'), msg.end());
        rr.diagnostic = "error: " + msg;
        return rr;
    }

    std::string command;
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome outcome;
        if (vertices_cmd->parsed()) {
            command = "vertices";
            outcome = cmd_vertices(o);
        } else if (facets_cmd->parsed()) {
            command = "facets";
            outcome = cmd_facets(o);
        } else if (member_cmd->parsed()) {
            command = "member";
            outcome = cmd_member(o);
        } else if (check_cmd->parsed()) {
            command = "elliptope check";
            outcome = cmd_elliptope_check(o);
        } else if (mesh_cmd->parsed()) {
            command = "elliptope mesh";
            outcome = cmd_elliptope_mesh(o);
        } else if (chi_cmd->parsed()) {
            command = "quantum chi";
            outcome = cmd_quantum_chi(o);
        } else if (rpoly_cmd->parsed()) {
            command = "raffle polytope";
            outcome = cmd_raffle_polytope(o);
        } else if (feasible_cmd->parsed()) {
            command = "raffle feasible";
            outcome = cmd_raffle_feasible(o);
        } else if (simulate_cmd->parsed()) {
            command = "raffle simulate";
            outcome = cmd_raffle_simulate(o);
        } else {
            command = "figure " + o.figure;
            outcome = cmd_figure(o);
        }
        const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        if (!outcome.files.empty()) echo["files"] = outcome.files;
        json metadata = {{"version", version}, {"seed", nullptr}};
        if (outcome.seed) metadata["seed"] = *outcome.seed;
        if (o.timing) metadata["timing_ms"] = elapsed;
        rr.report = json{{"command", command}, {"input", echo}, {"result", outcome.result}, {"metadata", metadata}};
        rr.exit_code = outcome.exit_code;
        rr.output = outcome.csv ? *outcome.csv : rr.report->dump(2) + "\n";
    } catch (const Error& e) {
        rr.exit_code = InputError;
        rr.diagnostic = std::string("error: ") + e.what();
    } catch (const json::exception& e) {
        rr.exit_code = InputError;
        rr.diagnostic = std::string("error: malformed JSON input: ") + e.what();
    } catch (const std::exception& e) {
        rr.exit_code = InputError;
        rr.diagnostic = std::string("error: ") + e.what();
    }
    if (!rr.diagnostic.empty()) {
        rr.diagnostic.erase(std::remove(rr.diagnostic.begin(), rr.diagnostic.end(), '\n'), rr.diagnostic.end());
        rr.report.reset();
        rr.output.clear();
    }
    return rr;
}

} // namespace corrgeo::cli

#endif
