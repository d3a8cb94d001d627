#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "kg/sweep.hpp"

namespace kg {

namespace {

constexpr const char* kHeader =
    "mu,alpha_exp,alpha,bin_idx,sample_idx,A,A_prime,classification,first_crossing_time,energy_drift,t_final,"
    "status,steps,wall_ms";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

template <class T>
T parse_number(const std::string& s, const char* field) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(fmt::format("malformed journal field {}: '{}'", field, s));
    }
    return value;
}

}  // namespace

std::string journal_header() { return kHeader; }

std::string format_record(const JournalRecord& r) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f}", r.mu, r.alpha_exp, r.alpha, r.bin_idx,
                       r.sample_idx, r.amplitude, r.amplitude_prime,
                       r.classification ? std::to_string(*r.classification) : std::string(),
                       r.first_crossing_time ? fmt::format("{}", *r.first_crossing_time) : std::string(),
                       r.energy_drift, r.t_final, r.status, r.steps, r.wall_ms);
}

JournalRecord parse_record(const std::string& line) {
    const auto f = split(line);
    if (f.size() != 14) throw IoError(fmt::format("journal line has {} fields, expected 14", f.size()));
    JournalRecord r;
    r.mu = parse_number<double>(f[0], "mu");
    r.alpha_exp = parse_number<int>(f[1], "alpha_exp");
    r.alpha = parse_number<double>(f[2], "alpha");
    r.bin_idx = parse_number<std::size_t>(f[3], "bin_idx");
    r.sample_idx = parse_number<std::size_t>(f[4], "sample_idx");
    r.amplitude = parse_number<double>(f[5], "A");
    r.amplitude_prime = parse_number<double>(f[6], "A_prime");
    if (!f[7].empty()) r.classification = parse_number<int>(f[7], "classification");
    if (!f[8].empty()) r.first_crossing_time = parse_number<double>(f[8], "first_crossing_time");
    r.energy_drift = parse_number<double>(f[9], "energy_drift");
    r.t_final = parse_number<double>(f[10], "t_final");
    r.status = f[11];
    r.steps = parse_number<std::size_t>(f[12], "steps");
    r.wall_ms = parse_number<double>(f[13], "wall_ms");
    if (r.classification && *r.classification != 0 && *r.classification != 1)
        throw IoError("journal classification must be 0 or 1");
    return r;
}

std::vector<JournalRecord> read_journal(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open journal {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<JournalRecord> records;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) break;  // torn final line
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (header) {
            if (line != kHeader) throw IoError(fmt::format("journal {} has an unexpected header", path.string()));
            header = false;
            continue;
        }
        if (line.empty()) continue;
        records.push_back(parse_record(line));
    }
    return records;
}

void write_journal(const std::filesystem::path& path, const std::vector<JournalRecord>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(fmt::format("cannot write journal {}", tmp.string()));
        out << kHeader << '\n';
        for (const auto& r : records) out << format_record(r) << '\n';
        if (!out) throw IoError(fmt::format("write to journal {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace kg
