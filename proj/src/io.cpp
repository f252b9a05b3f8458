#include "diamag/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "diamag/errors.hpp"

namespace diamag::io {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != header.size()) throw ConfigError("CSV row width does not match header");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {
std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}
}  // namespace

CsvTable parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    CsvTable table;
    if (!std::getline(is, line)) throw ConfigError("CSV text has no header");
    table.header = split(line, ',');
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& field : split(line, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(field, &used);
            } catch (const std::exception&) {
                throw ConfigError("malformed CSV field '" + field + "'");
            }
            if (used != field.size()) throw ConfigError("malformed CSV field '" + field + "'");
            row.push_back(v);
        }
        table.add_row(std::move(row));
    }
    return table;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void Record::set(std::string key, std::string value) {
    for (auto& [k, v] : items_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    items_.emplace_back(std::move(key), std::move(value));
}

void Record::set(std::string key, double value) { set(std::move(key), format_double(value)); }

std::string Record::to_string() const {
    std::string out;
    for (const auto& [k, v] : items_) out += k + '=' + v + '\n';
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_record(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

CsvTable modes_table(const ModeSet& modes) {
    CsvTable t{{"n", "nu_n", "f_n"}, {}};
    for (Eigen::Index n = 0; n < modes.size(); ++n) {
        t.add_row({static_cast<double>(n + 1), modes.frequencies(n), modes.couplings(n)});
    }
    return t;
}

std::string dump_model(const QuadraticModel& model) {
    std::ostringstream os;
    const auto& c = model.config;
    os << "sites=" << c.sites << '\n'
       << "length=" << format_double(c.length) << '\n'
       << "spacing=" << format_double(c.spacing()) << '\n'
       << "cutoff=" << format_double(c.cutoff()) << '\n'
       << "coupling=" << to_string(c.coupling) << '\n'
       << "delta=" << format_double(c.delta) << '\n'
       << "dipole=" << format_double(c.dipole) << '\n'
       << "charge_matrix.rows=" << model.charge_matrix.rows() << '\n'
       << "charge_matrix.cols=" << model.charge_matrix.cols() << '\n'
       << "flux_matrix.rows=" << model.flux_matrix.rows() << '\n'
       << "flux_matrix.cols=" << model.flux_matrix.cols() << '\n';
    auto entries = [&os](const char* name, const Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0.0) os << name << '(' << i << ',' << j << ")=" << format_double(m(i, j)) << '\n';
    };
    entries("A", model.charge_matrix);
    entries("B", model.flux_matrix);
    for (Eigen::Index i = 0; i < model.coupling.size(); ++i)
        if (model.coupling(i) != 0.0) os << "w(" << i << ")=" << format_double(model.coupling(i)) << '\n';
    return os.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

}  // namespace diamag::io
