#include "mubforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mubforge {

using nlohmann::json;

PhaseVector SolutionRecord::to_phases() const {
  PhaseVector phi{d, phases};
  if (!phi.well_formed()) {
    throw MubError("solution record: " + std::to_string(phases.size()) +
                   " phases, expected " + std::to_string(num_phases(d)) +
                   " for d = " + std::to_string(d));
  }
  return phi;
}

SolutionRecord make_record(const PhaseVector& phi) {
  SolutionRecord rec;
  rec.d = phi.d;
  rec.phases = phi.phases;
  rec.tool_version = kToolVersion;
  return rec;
}

std::string solution_to_json(const SolutionRecord& rec) {
  json j;
  j["d"] = rec.d;
  j["phases"] = rec.phases;
  j["format_version"] = rec.format_version;
  if (rec.F_final) j["F_final"] = *rec.F_final;
  if (rec.seed) j["seed"] = *rec.seed;
  if (rec.created_at) j["created_at"] = *rec.created_at;
  if (rec.tool_version) j["tool_version"] = *rec.tool_version;
  if (rec.classification) j["classification"] = json::parse(*rec.classification);
  return j.dump(2) + "\n";
}

SolutionRecord solution_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MubError(std::string("solution JSON parse error: ") + e.what());
  }
  if (!j.contains("d") || !j.contains("phases")) {
    throw MubError("solution JSON: missing required field 'd' or 'phases'");
  }
  SolutionRecord rec;
  rec.d = j.at("d").get<int>();
  rec.phases = j.at("phases").get<std::vector<double>>();
  if (rec.d < 2 ||
      static_cast<long>(rec.phases.size()) != num_phases(rec.d)) {
    throw MubError("solution JSON: phase count " +
                   std::to_string(rec.phases.size()) +
                   " inconsistent with d = " + std::to_string(rec.d));
  }
  rec.format_version = j.value("format_version", kFormatVersion);
  if (rec.format_version != kFormatVersion) {
    throw MubError("solution JSON: unsupported format_version " +
                   std::to_string(rec.format_version));
  }
  if (j.contains("F_final")) rec.F_final = j.at("F_final").get<double>();
  if (j.contains("seed")) rec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("created_at")) rec.created_at = j.at("created_at").get<std::string>();
  if (j.contains("tool_version")) rec.tool_version = j.at("tool_version").get<std::string>();
  if (j.contains("classification")) rec.classification = j.at("classification").dump();
  return rec;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MubError("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw MubError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw MubError("rename " + tmp + " -> " + path + " failed");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MubError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_solution(const SolutionRecord& rec, const std::string& path) {
  atomic_write(path, solution_to_json(rec));
}

SolutionRecord load_solution(const std::string& path) {
  return solution_from_json(read_file(path));
}

std::string gram_to_csv(const GramMatrix& g) {
  std::ostringstream out;
  out.precision(17);
  const int n = static_cast<int>(g.m.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << g.m(i, j).real() << ',' << g.m(i, j).imag();
    }
    out << '\n';
  }
  return out.str();
}

void write_gram_csv(const GramMatrix& g, const std::string& path) {
  atomic_write(path, gram_to_csv(g));
}

std::string summary_to_csv(const std::vector<SearchResult>& results) {
  std::ostringstream out;
  out.precision(17);
  out << "restart,accepted,F_final,iters1,iters2,seconds\n";
  for (const SearchResult& r : results) {
    // Wall time is scheduling-dependent; keep the column but round hard so
    // fixed-seed reruns produce identical files.
    out << r.restart_index << ',' << (r.accepted ? 1 : 0) << ',' << r.F_final
        << ',' << r.iters_stage1 << ',' << r.iters_stage2 << ','
        << static_cast<int>(r.wall_time) << '\n';
  }
  return out.str();
}

void write_summary_csv(const std::vector<SearchResult>& results,
                       const std::string& path) {
  atomic_write(path, summary_to_csv(results));
}

std::string perm_to_text(const Perm& p) {
  std::ostringstream out;
  out << p.size() << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out << ' ';
    out << p[i] + 1;
  }
  out << '\n';
  return out.str();
}

Perm perm_from_text(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n) || n <= 0) throw MubError("permutation file: bad size line");
  Perm p(n);
  for (int i = 0; i < n; ++i) {
    int v = 0;
    if (!(in >> v)) throw MubError("permutation file: truncated image list");
    p[i] = v - 1;
  }
  if (!is_valid_perm(p, n)) throw MubError("permutation file: not a bijection");
  return p;
}

void write_perm(const Perm& p, const std::string& path) {
  atomic_write(path, perm_to_text(p));
}

}  // namespace mubforge
