#include "scelo/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scelo {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, int line, const char* what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(std::string("bad ") + what + " '" + s + "'", line);
    return v;
}

bool skip_line(const std::string& line) {
    return line.empty() || line[0] == '#';
}

std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return line;
}

void write_comments(std::ostream& out, std::span<const std::string> comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
}

}  // namespace

std::vector<GameRecord> read_game_records(std::istream& in) {
    std::vector<GameRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp(line);
        if (skip_line(line)) continue;
        auto f = split_csv(line);
        if (f.size() != 9)
            throw ParseError("expected 9 comma-separated fields, got " + std::to_string(f.size()),
                             lineno);
        GameRecord r;
        r.game_id = f[0];
        r.a = {f[1], f[2]};
        r.b = {f[3], f[4]};
        r.scenario = f[5];
        if (r.a.player.empty() || r.b.player.empty())
            throw ParseError("player fields must be non-empty", lineno);
        if (!f[6].empty()) r.score_a = parse_double(f[6], lineno, "score_a");
        if (!f[7].empty()) r.score_b = parse_double(f[7], lineno, "score_b");
        if (f[8] == "A") r.outcome = Outcome::AWins;
        else if (f[8] == "B") r.outcome = Outcome::BWins;
        else if (f[8] == "D") r.outcome = Outcome::Draw;
        else throw ParseError("unknown outcome code '" + f[8] + "' (expected A, B, or D)", lineno);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<GameRecord> read_game_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_game_records(in);
}

void write_game_records(std::ostream& out, std::span<const GameRecord> records,
                        std::span<const std::string> header_comments) {
    write_comments(out, header_comments);
    for (const GameRecord& r : records) {
        out << r.game_id << ',' << r.a.player << ',' << r.a.role << ',' << r.b.player << ','
            << r.b.role << ',' << r.scenario << ',';
        if (r.score_a) out << format_double(*r.score_a);
        out << ',';
        if (r.score_b) out << format_double(*r.score_b);
        out << ',';
        switch (r.outcome) {
            case Outcome::AWins: out << 'A'; break;
            case Outcome::BWins: out << 'B'; break;
            case Outcome::Draw: out << 'D'; break;
        }
        out << '\n';
    }
}

std::map<std::string, RatingEstimate> read_priors(std::istream& in) {
    std::map<std::string, RatingEstimate> priors;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp(line);
        if (skip_line(line)) continue;
        auto f = split_csv(line);
        if (f.size() != 3) throw ParseError("expected player,mu,sigma", lineno);
        if (f[0].empty()) throw ParseError("player field must be non-empty", lineno);
        RatingEstimate est{parse_double(f[1], lineno, "mu"), parse_double(f[2], lineno, "sigma")};
        if (est.sigma < 0.0) throw ParseError("sigma must be >= 0", lineno);
        priors[f[0]] = est;
    }
    return priors;
}

std::map<std::string, RatingEstimate> read_priors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_priors(in);
}

void write_priors(std::ostream& out, const std::map<std::string, RatingEstimate>& priors,
                  std::span<const std::string> header_comments) {
    write_comments(out, header_comments);
    for (const auto& [player, est] : priors)
        out << player << ',' << format_double(est.mu) << ',' << format_double(est.sigma) << '\n';
}

std::vector<TruthRow> read_truth(std::istream& in) {
    std::vector<TruthRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp(line);
        if (skip_line(line)) continue;
        auto f = split_csv(line);
        if (f.size() != 4) throw ParseError("expected agent,red_cap,blue_cap,true_combined", lineno);
        rows.push_back({f[0], parse_double(f[1], lineno, "red_cap"),
                        parse_double(f[2], lineno, "blue_cap"),
                        parse_double(f[3], lineno, "true_combined")});
    }
    return rows;
}

std::vector<TruthRow> read_truth_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_truth(in);
}

void write_truth(std::ostream& out, std::span<const TruthRow> rows,
                 std::span<const std::string> header_comments) {
    write_comments(out, header_comments);
    for (const TruthRow& r : rows)
        out << r.agent << ',' << format_double(r.red_cap) << ',' << format_double(r.blue_cap)
            << ',' << format_double(r.true_combined) << '\n';
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, p);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace scelo
