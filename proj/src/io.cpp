#include "pcs/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pcs/error.hpp"

namespace pcs {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.generic_string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.generic_string());
    return buffer.str();
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
    return fnv1a64(read_file(path));
}

namespace {

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(const std::string& label, std::size_t line, const std::string& what) {
    throw ParseError(label + ":" + std::to_string(line) + ": " + what);
}

} // namespace

FeatureModel read_dimacs_text(std::string_view text, const std::string& label) {
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::string>> bindings; // var -> name
    std::vector<Clause> clauses;
    std::size_t declared_vars = 0;
    bool saw_problem = false;
    std::vector<Literal> pending;

    std::vector<std::string> lines = lines_of(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::istringstream in(lines[li]);
        std::string first;
        if (!(in >> first)) continue;
        if (first == "c") {
            std::size_t var = 0;
            std::string name;
            if (in >> var && in >> name && var > 0) bindings.emplace_back(var, name);
            continue;
        }
        if (first == "p") {
            std::string format;
            std::size_t clause_count = 0;
            if (!(in >> format >> declared_vars >> clause_count) || format != "cnf")
                fail(label, li + 1, "malformed problem line");
            if (declared_vars > 10'000'000)
                fail(label, li + 1, "implausible variable count " +
                                        std::to_string(declared_vars));
            saw_problem = true;
            continue;
        }
        if (!saw_problem) fail(label, li + 1, "clause before problem line");
        std::istringstream nums(lines[li]);
        long long value = 0;
        while (nums >> value) {
            if (value == 0) {
                if (!pending.empty()) {
                    clauses.emplace_back(pending);
                    pending.clear();
                }
                continue;
            }
            std::size_t var = static_cast<std::size_t>(value < 0 ? -value : value);
            if (var > declared_vars)
                fail(label, li + 1,
                     "literal " + std::to_string(value) + " beyond declared variable count");
            pending.push_back(Literal::from_code(static_cast<std::int32_t>(value)));
        }
        if (!nums.eof()) fail(label, li + 1, "malformed clause");
    }
    if (!saw_problem) fail(label, 1, "missing problem line");
    if (!pending.empty()) clauses.emplace_back(pending); // tolerate missing final 0

    names.assign(declared_vars, {});
    for (auto& [var, name] : bindings) {
        if (var <= declared_vars) names[var - 1] = std::move(name);
    }
    std::set<std::string> taken(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!names[i].empty()) continue;
        std::string synthetic = "x" + std::to_string(i + 1);
        while (taken.count(synthetic)) synthetic.insert(0, "_");
        taken.insert(synthetic);
        names[i] = std::move(synthetic);
    }
    for (const std::string& name : names) {
        if (!FeatureModel::valid_name(name) || name.find(',') != std::string::npos)
            throw ParseError(label + ": invalid feature name '" + name + "'");
    }
    return FeatureModel(std::move(names), std::move(clauses));
}

FeatureModel read_dimacs(const std::filesystem::path& path) {
    return read_dimacs_text(read_file(path), path.generic_string());
}

void write_dimacs(std::ostream& out, const FeatureModel& model) {
    for (FeatureIndex f = 1; f <= model.feature_count(); ++f)
        out << "c " << f << ' ' << model.name_of(f) << '\n';
    out << "p cnf " << model.feature_count() << ' ' << model.dependencies().size() << '\n';
    for (const Clause& clause : model.dependencies()) {
        for (Literal l : clause) out << l.code() << ' ';
        out << "0\n";
    }
}

void write_records(std::ostream& out, std::span<const LinePcRecord> records) {
    for (const LinePcRecord& record : records)
        out << record.file << '\t' << record.line << '\t' << to_string(record.condition) << '\n';
}

std::vector<LinePcRecord> read_records_text(std::string_view text, const std::string& label) {
    std::vector<LinePcRecord> records;
    std::vector<std::string> lines = lines_of(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (line.empty()) continue;
        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                     : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) fail(label, li + 1, "expected <path>\\t<line>\\t<formula>");
        LinePcRecord record;
        record.file = line.substr(0, tab1);
        try {
            record.line = static_cast<std::uint32_t>(
                std::stoul(line.substr(tab1 + 1, tab2 - tab1 - 1)));
            record.condition = parse_formula(std::string_view(line).substr(tab2 + 1));
        } catch (const std::exception& e) {
            fail(label, li + 1, e.what());
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<LinePcRecord> read_records(const std::filesystem::path& path) {
    return read_records_text(read_file(path), path.generic_string());
}

namespace {

// In-order atom walk, so implicit feature indices follow first occurrence.
void collect_in_order(const Expr& expr, std::set<std::string>& seen,
                      std::vector<std::string>& out) {
    if (expr.kind() == Expr::Kind::atom) {
        if (seen.insert(expr.name()).second) out.push_back(expr.name());
        return;
    }
    for (const Expr& op : expr.operands()) collect_in_order(op, seen, out);
}

} // namespace

FeatureModel implicit_model(std::span<const LinePcRecord> records) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const LinePcRecord& record : records) collect_in_order(record.condition, seen, names);
    return FeatureModel(std::move(names), {});
}

std::vector<RawCondition> to_raw_conditions(std::span<const LinePcRecord> records,
                                            const FeatureModel& model,
                                            std::set<std::string>& unknown) {
    std::vector<RawCondition> raws;
    raws.reserve(records.size());
    for (const LinePcRecord& record : records) {
        raws.push_back({filter_unknown_features(record.condition, model, unknown), record.file,
                        record.line});
    }
    return raws;
}

void write_sample_csv(std::ostream& out, const Sample& sample, const FeatureModel& model) {
    for (FeatureIndex f = 1; f <= model.feature_count(); ++f) {
        if (f > 1) out << ',';
        out << model.name_of(f);
    }
    out << '\n';
    for (const Configuration& config : sample.configurations) {
        if (!complete(config, model))
            throw ContractError("cannot serialize a partial configuration");
        for (FeatureIndex f = 1; f <= model.feature_count(); ++f) {
            if (f > 1) out << ',';
            out << (config.assignment_for(f)->is_positive() ? '+' : '-');
        }
        out << '\n';
    }
}

Sample read_sample_csv_text(std::string_view text, const FeatureModel& model,
                            const std::string& label) {
    std::vector<std::string> lines = lines_of(text);
    if (lines.empty()) fail(label, 1, "missing header row");

    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return fields;
    };

    std::vector<std::string> header = split(lines[0]);
    std::vector<FeatureIndex> columns;
    std::vector<std::string> offenders;
    std::vector<bool> present(model.feature_count() + 1, false);
    for (const std::string& name : header) {
        auto index = model.index_of(name);
        if (!index) {
            offenders.push_back(name);
            continue;
        }
        present[*index] = true;
        columns.push_back(*index);
    }
    for (FeatureIndex f = 1; f <= model.feature_count(); ++f) {
        if (!present[f]) offenders.push_back(model.name_of(f) + " (missing)");
    }
    if (!offenders.empty()) {
        std::string joined;
        for (const std::string& o : offenders) joined += (joined.empty() ? "" : ", ") + o;
        fail(label, 1, "header does not match the model's feature names: " + joined);
    }

    Sample sample;
    sample.model_hash = model.hash();
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::vector<std::string> cells = split(lines[li]);
        if (cells.size() != columns.size())
            fail(label, li + 1,
                 "expected " + std::to_string(columns.size()) + " cells, got " +
                     std::to_string(cells.size()));
        std::vector<Literal> literals;
        literals.reserve(cells.size());
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            if (cells[ci] == "+")
                literals.push_back(Literal::positive(columns[ci]));
            else if (cells[ci] == "-")
                literals.push_back(Literal::negative(columns[ci]));
            else
                fail(label, li + 1, "cell must be '+' or '-', got '" + cells[ci] + "'");
        }
        auto config = Configuration::try_from(literals);
        if (!config) fail(label, li + 1, "row assigns a feature twice");
        sample.configurations.push_back(std::move(*config));
    }
    return sample;
}

Sample read_sample_csv(const std::filesystem::path& path, const FeatureModel& model) {
    return read_sample_csv_text(read_file(path), model, path.generic_string());
}

std::vector<FaultRecord> read_faults_text(std::string_view text, const std::string& label) {
    std::vector<FaultRecord> faults;
    std::vector<std::string> lines = lines_of(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (line.empty() || line.front() == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) fail(label, li + 1, "expected <id>\\t<formula>");
        FaultRecord fault;
        fault.id = line.substr(0, tab);
        try {
            fault.formula = parse_formula(std::string_view(line).substr(tab + 1));
        } catch (const std::exception& e) {
            fail(label, li + 1, e.what());
        }
        faults.push_back(std::move(fault));
    }
    return faults;
}

std::vector<FaultRecord> read_faults(const std::filesystem::path& path) {
    return read_faults_text(read_file(path), path.generic_string());
}

} // namespace pcs
