#include "pcs/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcs/coverage.hpp"
#include "pcs/error.hpp"
#include "pcs/extract.hpp"
#include "pcs/io.hpp"
#include "pcs/sampler.hpp"
#include "pcs/sat.hpp"
#include "pcs/transform.hpp"

namespace pcs {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t value) {
    std::ostringstream s;
    s << std::hex << std::setfill('0') << std::setw(16) << value;
    return s.str();
}

void manifest_line(std::ostream& err, std::string_view key, const std::string& value) {
    err << key << ": " << value << '\n';
}

void manifest_time(std::ostream& err, std::string_view key, double ms) {
    err << key << ": " << std::fixed << std::setprecision(3) << ms << '\n';
}

void manifest_input(std::ostream& err, std::string_view role, const std::string& path) {
    err << "input: " << role << ' ' << path << " fnv1a64=" << hex64(file_checksum(path)) << '\n';
}

struct CommonSampleArgs {
    std::string model_path;
    std::string pcs_path;
    std::uint32_t t = 2;
    std::string mode_name = "pc";
    std::string group_name = "none";
    std::uint64_t seed = 0;
    std::uint64_t interaction_cap = std::uint64_t{1} << 31;
    std::size_t clause_cap = 1'000'000;
    std::uint64_t timeout_ms = 30'000;
};

struct LoadedUniverse {
    FeatureModel model;
    PcUniverse universe;
    std::vector<LinePcRecord> records;
    double preprocess_ms = 0.0;
};

Mode parse_mode(const std::string& name) {
    auto mode = mode_from_string(name);
    if (!mode || *mode == Mode::random) throw Error("unknown mode '" + name + "'");
    return *mode;
}

Grouping parse_grouping(const std::string& name) {
    if (name == "none") return Grouping::none;
    if (name == "file") return Grouping::file;
    if (name == "folder") return Grouping::folder;
    throw Error("unknown grouping '" + name + "'");
}

// Loads model + records and runs preprocessing. Reports unknown-feature
// warnings on err.
LoadedUniverse load_universe(const CommonSampleArgs& args, std::ostream& err) {
    LoadedUniverse loaded;
    Mode mode = parse_mode(args.mode_name);
    Grouping grouping = parse_grouping(args.group_name);

    if (!args.pcs_path.empty()) loaded.records = read_records(args.pcs_path);
    if (mode != Mode::fm && args.pcs_path.empty())
        throw Error("--pcs is required for mode '" + args.mode_name + "'");
    if (args.model_path.empty() && mode == Mode::fm)
        throw Error("--model is required for mode 'fm'");

    loaded.model = args.model_path.empty() ? implicit_model(loaded.records)
                                           : read_dimacs(args.model_path);

    std::set<std::string> unknown;
    std::vector<RawCondition> raws = to_raw_conditions(loaded.records, loaded.model, unknown);
    if (!unknown.empty()) {
        err << "warning: " << unknown.size()
            << " feature name(s) not in the model, affected conjuncts assumed true:";
        for (const std::string& name : unknown) err << ' ' << name;
        err << '\n';
    }

    TransformOptions topt;
    topt.clause_cap = args.clause_cap;
    Clock::time_point start = Clock::now();
    loaded.universe = preprocess(raws, loaded.model, mode, grouping, topt);
    loaded.preprocess_ms = ms_since(start);
    return loaded;
}

void write_file_or_throw(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << contents;
    if (!out) throw IoError("write failure on " + path);
}

int cmd_extract(const std::string& root, const std::vector<std::string>& excludes,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
    (void)out;
    Clock::time_point start = Clock::now();
    TreeExtraction result = extract_tree(root, excludes);
    double extract_ms = ms_since(start);

    std::ostringstream body;
    write_records(body, result.records);
    write_file_or_throw(out_path, body.str());

    for (const ExtractWarning& w : result.warnings)
        err << "warning: " << w.file << ':' << w.line << ": " << w.message << '\n';
    for (const ExtractFileError& e : result.errors) err << "error: " << e.message << '\n';

    manifest_line(err, "command", "extract");
    manifest_line(err, "root", root);
    manifest_line(err, "output", out_path + " fnv1a64=" + hex64(fnv1a64(body.str())));
    manifest_line(err, "files", std::to_string(result.file_count));
    manifest_line(err, "records", std::to_string(result.records.size()));
    manifest_line(err, "warnings", std::to_string(result.warnings.size()));
    manifest_line(err, "errors", std::to_string(result.errors.size()));
    manifest_time(err, "extract-ms", extract_ms);
    return result.errors.empty() ? 0 : 2;
}

int cmd_sample(const CommonSampleArgs& args, bool shuffle, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
    (void)out;
    LoadedUniverse loaded = load_universe(args, err);

    SatContext sat(loaded.model);
    sat.set_timeout(std::chrono::milliseconds(args.timeout_ms));
    if (!sat.valid(Configuration{})) throw Error("feature model is unsatisfiable");

    SamplerOptions options;
    options.t = args.t;
    options.seed = args.seed;
    options.interaction_cap = args.interaction_cap;
    options.shuffle_entries = shuffle;
    options.transform.clause_cap = args.clause_cap;
    options.query_timeout = std::chrono::milliseconds(args.timeout_ms);

    SamplerStats stats;
    Clock::time_point start = Clock::now();
    Sample result = sample_grouped(loaded.universe, loaded.model, options, &stats);
    double sample_ms = ms_since(start);

    std::ostringstream body;
    write_sample_csv(body, result, loaded.model);
    write_file_or_throw(out_path, body.str());

    manifest_line(err, "command", "sample");
    if (!args.model_path.empty()) manifest_input(err, "model", args.model_path);
    if (!args.pcs_path.empty()) manifest_input(err, "pcs", args.pcs_path);
    manifest_line(err, "t", std::to_string(args.t));
    manifest_line(err, "mode", args.mode_name);
    manifest_line(err, "group", args.group_name);
    manifest_line(err, "seed", std::to_string(args.seed));
    manifest_line(err, "universe-entries", std::to_string(loaded.universe.size()));
    manifest_line(err, "interactions", std::to_string(stats.enumerated));
    manifest_line(err, "configurations", std::to_string(result.configurations.size()));
    manifest_line(err, "output", out_path + " fnv1a64=" + hex64(fnv1a64(body.str())));
    manifest_time(err, "preprocess-ms", loaded.preprocess_ms);
    manifest_time(err, "sample-ms", sample_ms);
    return 0;
}

int cmd_coverage(const CommonSampleArgs& args, const std::string& sample_path,
                 std::size_t uncovered_cap, bool json, std::ostream& out, std::ostream& err) {
    LoadedUniverse loaded = load_universe(args, err);
    Sample sample = read_sample_csv(sample_path, loaded.model);
    sample.t = args.t;
    sample.mode = parse_mode(args.mode_name);

    SatContext sat(loaded.model);
    sat.set_timeout(std::chrono::milliseconds(args.timeout_ms));
    for (std::size_t i = 0; i < sample.configurations.size(); ++i) {
        if (!sat.valid(sample.configurations[i]))
            throw Error(sample_path + ": configuration " + std::to_string(i + 1) +
                        " violates the feature model");
    }

    CoverageOptions options;
    options.t = args.t;
    options.uncovered_cap = uncovered_cap;
    options.transform.clause_cap = args.clause_cap;
    options.query_timeout = std::chrono::milliseconds(args.timeout_ms);

    Clock::time_point start = Clock::now();
    CoverageReport report = coverage(sample, loaded.universe, loaded.model, options);
    double coverage_ms = ms_since(start);

    out << "t: " << report.t << '\n';
    out << "mode: " << to_string(report.mode) << '\n';
    out << "configurations: " << sample.configurations.size() << '\n';
    out << "total_valid_interactions: " << report.total_valid_interactions << '\n';
    out << "covered_interactions: " << report.covered_interactions << '\n';
    out << "ratio: " << std::fixed << std::setprecision(6) << report.ratio() << '\n';
    out << "uncovered_count: " << report.uncovered_total << '\n';
    for (const PresenceCondition& pc : report.uncovered)
        out << "uncovered: " << to_string(pc, loaded.model) << '\n';
    if (json) {
        nlohmann::json j;
        j["t"] = report.t;
        j["mode"] = std::string(to_string(report.mode));
        j["configurations"] = sample.configurations.size();
        j["total_valid_interactions"] = report.total_valid_interactions;
        j["covered_interactions"] = report.covered_interactions;
        j["ratio"] = report.ratio();
        j["uncovered_count"] = report.uncovered_total;
        nlohmann::json uncovered = nlohmann::json::array();
        for (const PresenceCondition& pc : report.uncovered)
            uncovered.push_back(to_string(pc, loaded.model));
        j["uncovered"] = std::move(uncovered);
        out << j.dump() << '\n';
    }

    manifest_line(err, "command", "coverage");
    if (!args.model_path.empty()) manifest_input(err, "model", args.model_path);
    if (!args.pcs_path.empty()) manifest_input(err, "pcs", args.pcs_path);
    manifest_input(err, "sample", sample_path);
    manifest_line(err, "t", std::to_string(args.t));
    manifest_line(err, "mode", args.mode_name);
    manifest_time(err, "coverage-ms", coverage_ms);
    return 0;
}

FeatureModel model_from_csv_header(const std::string& sample_path) {
    std::string text = read_file(sample_path);
    std::string header = text.substr(0, text.find('\n'));
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> names;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = header.find(',', start);
        names.push_back(header.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return FeatureModel(std::move(names), {});
}

int cmd_faults(const std::string& sample_path, const std::string& model_path,
               const std::string& faults_path, std::ostream& out, std::ostream& err) {
    FeatureModel model =
        model_path.empty() ? model_from_csv_header(sample_path) : read_dimacs(model_path);
    Sample sample = read_sample_csv(sample_path, model);
    std::vector<FaultRecord> faults = read_faults(faults_path);

    std::size_t covered = 0, uncovered = 0, skipped = 0;
    for (const FaultRecord& fault : faults) {
        std::set<std::string> atoms;
        fault.formula.collect_atoms(atoms);
        std::vector<std::string> unknown;
        for (const std::string& atom : atoms) {
            if (!model.index_of(atom)) unknown.push_back(atom);
        }
        if (!unknown.empty()) {
            ++skipped;
            err << "warning: fault '" << fault.id << "' skipped, unknown feature(s):";
            for (const std::string& name : unknown) err << ' ' << name;
            err << '\n';
            continue;
        }
        PresenceCondition condition = dnf_of(fault.formula, model);
        if (!condition.is_proper()) {
            ++skipped;
            err << "warning: fault '" << fault.id << "' skipped, condition is "
                << (condition.is_tautology() ? "a tautology" : "a contradiction") << '\n';
            continue;
        }
        FaultSpec spec{fault.id, std::move(condition)};
        bool hit = fault_covered(sample, spec);
        out << fault.id << '\t' << spec.degree() << '\t' << (hit ? "covered" : "uncovered")
            << '\n';
        hit ? ++covered : ++uncovered;
    }
    out << "covered: " << covered << '\n';
    out << "uncovered: " << uncovered << '\n';
    out << "skipped: " << skipped << '\n';

    manifest_line(err, "command", "faults");
    manifest_input(err, "sample", sample_path);
    if (!model_path.empty()) manifest_input(err, "model", model_path);
    manifest_input(err, "faults", faults_path);
    return 0;
}

int cmd_random(const std::string& model_path, std::size_t n, std::uint64_t seed,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
    (void)out;
    FeatureModel model = read_dimacs(model_path);
    Clock::time_point start = Clock::now();
    Sample result = random_sample(model, n, seed);
    double random_ms = ms_since(start);

    std::ostringstream body;
    write_sample_csv(body, result, model);
    write_file_or_throw(out_path, body.str());

    manifest_line(err, "command", "random");
    manifest_input(err, "model", model_path);
    manifest_line(err, "n", std::to_string(n));
    manifest_line(err, "seed", std::to_string(seed));
    manifest_line(err, "output", out_path + " fnv1a64=" + hex64(fnv1a64(body.str())));
    manifest_time(err, "random-ms", random_ms);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"t-wise presence-condition sampling and coverage for C projects"};
    app.require_subcommand(1);

    // extract
    auto* extract = app.add_subcommand("extract",
                                       "extract per-line presence conditions from a source tree");
    std::string root;
    std::string extract_out;
    std::vector<std::string> excludes;
    extract->add_option("root", root, "source tree root")->required();
    extract->add_option("-o,--out", extract_out, "output records file")->required();
    extract->add_option("--exclude", excludes, "path glob to skip (repeatable)");

    // shared sampling/coverage options
    CommonSampleArgs common;
    bool shuffle = false;
    auto add_common = [&common](CLI::App* cmd, bool with_group) {
        cmd->add_option("-m,--model", common.model_path, "DIMACS feature model");
        cmd->add_option("-p,--pcs", common.pcs_path, "presence-condition records file");
        cmd->add_option("-t,--t", common.t, "interaction size")->check(CLI::PositiveNumber);
        cmd->add_option("--mode", common.mode_name, "universe mode")
            ->check(CLI::IsMember({"pc", "fm", "concrete"}));
        if (with_group)
            cmd->add_option("--group", common.group_name, "interaction grouping")
                ->check(CLI::IsMember({"none", "file", "folder"}));
        cmd->add_option("--seed", common.seed, "random seed");
        cmd->add_option("--cap", common.interaction_cap, "interaction count cap");
        cmd->add_option("--clause-cap", common.clause_cap, "DNF clause blow-up cap");
        cmd->add_option("--timeout-ms", common.timeout_ms, "per-query solver timeout");
    };

    auto* sample_cmd = app.add_subcommand("sample", "construct a t-wise covering sample");
    std::string sample_out;
    add_common(sample_cmd, true);
    sample_cmd->add_option("-o,--out", sample_out, "output sample CSV")->required();
    sample_cmd->add_flag("--shuffle", shuffle, "enumerate a seed-shuffled universe order");

    auto* coverage_cmd = app.add_subcommand("coverage", "measure t-wise coverage of a sample");
    std::string sample_path;
    std::size_t uncovered_cap = 100;
    bool json = false;
    add_common(coverage_cmd, false);
    coverage_cmd->add_option("-s,--sample", sample_path, "sample CSV")->required();
    coverage_cmd->add_option("--uncovered-cap", uncovered_cap, "max uncovered listed");
    coverage_cmd->add_flag("--json", json, "append a JSON report block");

    auto* faults_cmd = app.add_subcommand("faults", "check fault presence conditions");
    std::string faults_sample, faults_model, faults_path;
    faults_cmd->add_option("-s,--sample", faults_sample, "sample CSV")->required();
    faults_cmd->add_option("-m,--model", faults_model, "DIMACS feature model");
    faults_cmd->add_option("-f,--faults", faults_path, "fault list (<id>\\t<formula>)")
        ->required();

    auto* random_cmd = app.add_subcommand("random", "draw random valid configurations");
    std::string random_model, random_out;
    std::size_t random_n = 0;
    std::uint64_t random_seed = 0;
    random_cmd->add_option("-m,--model", random_model, "DIMACS feature model")->required();
    random_cmd->add_option("-n,--n", random_n, "number of configurations")->required();
    random_cmd->add_option("--seed", random_seed, "random seed");
    random_cmd->add_option("-o,--out", random_out, "output sample CSV")->required();

    std::vector<const char*> argv;
    argv.push_back("pcsamp");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; every usage problem is an input error
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (extract->parsed()) return cmd_extract(root, excludes, extract_out, out, err);
        if (sample_cmd->parsed()) return cmd_sample(common, shuffle, sample_out, out, err);
        if (coverage_cmd->parsed())
            return cmd_coverage(common, sample_path, uncovered_cap, json, out, err);
        if (faults_cmd->parsed())
            return cmd_faults(faults_sample, faults_model, faults_path, out, err);
        if (random_cmd->parsed())
            return cmd_random(random_model, random_n, random_seed, random_out, out, err);
    } catch (const CapError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace pcs
