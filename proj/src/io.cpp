#include "bpmine/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace bpmine {

namespace {

constexpr std::string_view kNetworkMagic = "bpnet 1";

std::string format_probability(double p) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter))
        fields.push_back(field);
    if (!line.empty() && line.back() == delimiter)
        fields.emplace_back();
    return fields;
}

std::vector<std::string> to_lines(std::string_view bytes) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = bytes.size();
        std::string line(bytes.substr(pos, nl - pos));
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
    throw FormatError("line " + std::to_string(line) + ": " + what);
}

double parse_probability(const std::string& token, std::size_t line) {
    if (token.empty())
        fail_at(line, "empty probability field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v))
        fail_at(line, "bad probability '" + token + "'");
    return v;
}

void check_name_serializable(const std::string& name) {
    if (name.empty())
        throw FormatError("variable name is empty");
    if (name.find('\t') != std::string::npos || name.find('\n') != std::string::npos ||
        name.find('\r') != std::string::npos)
        throw FormatError("variable name '" + name + "' contains tab or newline");
}

struct VariableRecord {
    std::string name;
    std::vector<std::string> parents;
    std::vector<ProbPair> rows;
    std::size_t line = 0; // of the "variable" keyword
};

void check_cycle_free(const std::vector<VariableRecord>& records) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i)
        index.emplace(records[i].name, i);

    std::vector<std::size_t> indegree(records.size(), 0);
    std::vector<std::vector<std::size_t>> children(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (const std::string& p : records[i].parents) {
            children[index.at(p)].push_back(i);
            ++indegree[i];
        }
    }
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (indegree[i] == 0)
            ready.push_back(i);
    std::size_t done = 0;
    while (!ready.empty()) {
        const std::size_t i = ready.front();
        ready.pop_front();
        ++done;
        for (std::size_t c : children[i])
            if (--indegree[c] == 0)
                ready.push_back(c);
    }
    if (done != records.size())
        throw CycleError("network document contains a directed parent cycle");
}

} // namespace

std::string save_network(const BayesianNetwork& net) {
    std::ostringstream out;
    out << kNetworkMagic << '\n';
    for (const std::string& name : net.variables()) {
        check_name_serializable(name);
        const Cpt& cpt = net.cpt(name);
        out << "variable\t" << name << '\n';
        out << "states\tpresent\tabsent\n";
        out << "parents";
        for (const std::string& p : cpt.parents)
            out << '\t' << p;
        out << '\n';
        for (const ProbPair& row : cpt.rows)
            out << "row\t" << format_probability(row.present) << '\t'
                << format_probability(row.absent) << '\n';
    }
    return out.str();
}

BayesianNetwork load_network(std::string_view bytes) {
    const std::vector<std::string> lines = to_lines(bytes);
    if (lines.empty() || lines[0] != kNetworkMagic)
        throw FormatVersionError("expected first line '" + std::string(kNetworkMagic) + "'" +
                                 (lines.empty() ? ", got empty document"
                                                : ", got '" + lines[0] + "'"));

    std::vector<VariableRecord> records;
    enum class Expect { variable, states, parents, row_or_variable };
    Expect expect = Expect::variable;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty())
            continue;
        const std::vector<std::string> fields = split(lines[i], '\t');
        const std::string& keyword = fields[0];

        if (keyword == "variable") {
            if (expect != Expect::variable && expect != Expect::row_or_variable)
                fail_at(line_no, "unexpected 'variable'");
            if (fields.size() != 2 || fields[1].empty())
                fail_at(line_no, "'variable' needs exactly one non-empty name");
            records.push_back({fields[1], {}, {}, line_no});
            expect = Expect::states;
        } else if (keyword == "states") {
            if (expect != Expect::states)
                fail_at(line_no, "unexpected 'states'");
            if (fields.size() != 3 || fields[1] != "present" || fields[2] != "absent")
                fail_at(line_no, "only binary present/absent variables are supported");
            expect = Expect::parents;
        } else if (keyword == "parents") {
            if (expect != Expect::parents)
                fail_at(line_no, "unexpected 'parents'");
            for (std::size_t f = 1; f < fields.size(); ++f) {
                if (fields[f].empty())
                    fail_at(line_no, "empty parent name");
                records.back().parents.push_back(fields[f]);
            }
            expect = Expect::row_or_variable;
        } else if (keyword == "row") {
            if (expect != Expect::row_or_variable)
                fail_at(line_no, "unexpected 'row'");
            if (fields.size() != 3)
                fail_at(line_no, "'row' needs exactly two probabilities");
            ProbPair row;
            row.present = parse_probability(fields[1], line_no);
            row.absent = parse_probability(fields[2], line_no);
            VariableRecord& rec = records.back();
            rec.rows.push_back(row);
            if (rec.rows.size() > (std::size_t{1} << rec.parents.size()))
                fail_at(line_no, "too many rows for '" + rec.name + "' (" +
                                     std::to_string(rec.parents.size()) + " parents)");
        } else {
            fail_at(line_no, "unknown keyword '" + keyword + "'");
        }
    }
    if (expect == Expect::states || expect == Expect::parents)
        throw FormatError("document ends inside an incomplete variable block");

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (!index.emplace(records[i].name, i).second)
            fail_at(records[i].line, "duplicate variable '" + records[i].name + "'");

    for (const VariableRecord& rec : records) {
        const std::size_t want = std::size_t{1} << rec.parents.size();
        if (rec.rows.size() != want)
            fail_at(rec.line, "'" + rec.name + "' has " + std::to_string(rec.rows.size()) +
                                  " rows, expected " + std::to_string(want));
        std::set<std::string> seen;
        for (const std::string& p : rec.parents) {
            if (!index.count(p))
                fail_at(rec.line, "'" + rec.name + "' lists unknown parent '" + p + "'");
            if (!seen.insert(p).second)
                fail_at(rec.line, "'" + rec.name + "' lists parent '" + p + "' twice");
        }
        for (std::size_t mask = 0; mask < rec.rows.size(); ++mask) {
            const ProbPair& row = rec.rows[mask];
            if (row.present < 0.0 || row.present > 1.0 || row.absent < 0.0 ||
                row.absent > 1.0 ||
                std::abs(row.present + row.absent - 1.0) > BayesianNetwork::kRowSumTolerance)
                throw NormalizationError("row " + std::to_string(mask) + " of '" + rec.name +
                                         "' is not a distribution (" +
                                         format_probability(row.present) + ", " +
                                         format_probability(row.absent) + ")");
        }
    }
    check_cycle_free(records);

    std::vector<std::string> variables;
    std::map<std::string, std::vector<std::string>> parents;
    std::map<std::string, std::vector<ProbPair>> cpts;
    for (VariableRecord& rec : records) {
        variables.push_back(rec.name);
        parents.emplace(rec.name, std::move(rec.parents));
        cpts.emplace(rec.name, std::move(rec.rows));
    }
    return BayesianNetwork(std::move(variables), std::move(parents), std::move(cpts));
}

std::string save_training(const PresenceMatrix& matrix, char delimiter) {
    if (matrix.variables.empty())
        throw FormatError("training matrix has no variables");
    std::ostringstream out;
    for (std::size_t i = 0; i < matrix.variables.size(); ++i) {
        const std::string& name = matrix.variables[i];
        if (name.empty() || name.find(delimiter) != std::string::npos ||
            name.find('\n') != std::string::npos || name.find('\r') != std::string::npos)
            throw FormatError("variable name '" + name + "' cannot be serialized");
        if (i)
            out << delimiter;
        out << name;
    }
    out << '\n';
    for (Eigen::Index r = 0; r < matrix.rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix.rows.cols(); ++c) {
            if (c)
                out << delimiter;
            out << (matrix.rows(r, c) ? "present" : "absent");
        }
        out << '\n';
    }
    return out.str();
}

PresenceMatrix load_training(std::string_view bytes, char delimiter) {
    const std::vector<std::string> lines = to_lines(bytes);
    if (lines.empty() || lines[0].empty())
        throw FormatError("line 1: missing variable name header");

    PresenceMatrix matrix;
    matrix.variables = split(lines[0], delimiter);
    std::set<std::string> seen;
    for (const std::string& name : matrix.variables) {
        if (name.empty())
            throw FormatError("line 1: empty variable name");
        if (!seen.insert(name).second)
            throw FormatError("line 1: duplicate variable '" + name + "'");
    }

    const auto cols = static_cast<Eigen::Index>(matrix.variables.size());
    std::vector<std::vector<uint8_t>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const std::vector<std::string> fields = split(lines[i], delimiter);
        if (fields.size() != matrix.variables.size())
            fail_at(i + 1, "expected " + std::to_string(matrix.variables.size()) +
                               " fields, got " + std::to_string(fields.size()));
        std::vector<uint8_t> row(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (fields[f] == "present")
                row[f] = 1;
            else if (fields[f] == "absent")
                row[f] = 0;
            else
                fail_at(i + 1, "bad state token '" + fields[f] + "'");
        }
        rows.push_back(std::move(row));
    }

    matrix.rows.resize(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            matrix.rows(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    return matrix;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw DataError("error while reading '" + path.string() + "'");
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw DataError("error while writing '" + path.string() + "'");
}

} // namespace bpmine
