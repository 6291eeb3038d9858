#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mubforge/optimize.hpp"
#include "mubforge/symmetry.hpp"

namespace mubforge {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct SolutionRecord {
  int d = 0;
  std::vector<double> phases;  // storage order, radians
  int format_version = kFormatVersion;
  std::optional<double> F_final;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> created_at;
  std::optional<std::string> tool_version;
  std::optional<std::string> classification;  // embedded JSON object text

  PhaseVector to_phases() const;
};

SolutionRecord make_record(const PhaseVector& phi);

// JSON text of the record; doubles serialized with shortest round-trip
// representation so load(save(x)) is bit-exact.
std::string solution_to_json(const SolutionRecord& rec);
SolutionRecord solution_from_json(const std::string& text);

// Atomic persistence: write to a sibling temp file, then rename.
void save_solution(const SolutionRecord& rec, const std::string& path);
SolutionRecord load_solution(const std::string& path);

void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Row-major CSV with interleaved re/im columns (2N values per row).
std::string gram_to_csv(const GramMatrix& g);
void write_gram_csv(const GramMatrix& g, const std::string& path);

// Columns: restart, accepted, F_final, iters1, iters2, seconds.
std::string summary_to_csv(const std::vector<SearchResult>& results);
void write_summary_csv(const std::vector<SearchResult>& results,
                       const std::string& path);

// First line n, second line space-separated 1-based images.
std::string perm_to_text(const Perm& p);
Perm perm_from_text(const std::string& text);
void write_perm(const Perm& p, const std::string& path);

}  // namespace mubforge
