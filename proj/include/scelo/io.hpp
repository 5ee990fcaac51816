#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scelo/types.hpp"

namespace scelo {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, int line) : std::runtime_error(what), line(line) {}
    int line;
};

// Game-record file: one comma-separated record per line,
//   game_id,player_a,role_a,player_b,role_b,scenario,score_a,score_b,outcome
// with outcome in {A,B,D} and score fields optionally empty. Lines that are
// blank or start with '#' are skipped.
std::vector<GameRecord> read_game_records(std::istream& in);
std::vector<GameRecord> read_game_records_file(const std::string& path);
void write_game_records(std::ostream& out, std::span<const GameRecord> records,
                        std::span<const std::string> header_comments = {});

// Priors file: player,mu,sigma per line.
std::map<std::string, RatingEstimate> read_priors(std::istream& in);
std::map<std::string, RatingEstimate> read_priors_file(const std::string& path);
void write_priors(std::ostream& out, const std::map<std::string, RatingEstimate>& priors,
                  std::span<const std::string> header_comments = {});

// Truth file emitted by the simulator: agent,red_cap,blue_cap,true_combined.
struct TruthRow {
    std::string agent;
    double red_cap;
    double blue_cap;
    double true_combined;
};
std::vector<TruthRow> read_truth(std::istream& in);
std::vector<TruthRow> read_truth_file(const std::string& path);
void write_truth(std::ostream& out, std::span<const TruthRow> rows,
                 std::span<const std::string> header_comments = {});

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit digest of a byte string, as fixed-width hex.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file_bytes(const std::string& path);

}  // namespace scelo
