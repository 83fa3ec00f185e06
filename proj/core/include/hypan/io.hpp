#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypan/geometry.hpp"
#include "hypan/symbol.hpp"

namespace hypan {

/// Flat key=value files with [section] headers; '#' starts a comment.
struct ConfigEntry {
  std::string key, value;
  int line = 0;
};
struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;
};
using ConfigFile = std::vector<ConfigSection>;

std::string read_file(const std::string& path);
ConfigFile parse_ini(const std::string& text);
ConfigFile load_ini(const std::string& path);

const ConfigSection* find_section(const ConfigFile& cfg, const std::string& name);
const ConfigEntry* find_entry(const ConfigSection& sec, const std::string& key);
std::optional<std::string> lookup_value(const ConfigFile& cfg, const std::string& section,
                                        const std::string& key);
std::string require_value(const ConfigFile& cfg, const std::string& section,
                          const std::string& key);

std::vector<double> parse_double_list(const std::string& text);
int parse_int(const std::string& text);
double parse_double(const std::string& text);

/// System file: [system] with name/dimension/space_dim, then one [A<j>]
/// section per coefficient matrix with comma-separated polynomial entries
/// row1..rowN over the variables t, x1..xd.
SystemSymbol load_system(const std::string& path);

/// Chart file: [chart] with space_dim and defining functions phi1..phik
/// over t, x1..xd, tau, xi1..xid.
ManifoldChart load_chart(const std::string& path);

std::uint64_t fnv1a_hash(const std::string& text);

/// Deterministic shortest-ish formatting used by every writer.
std::string format_double(double v);
std::string format_complex(cplx v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Row-major "i j re im" triplets of the nonzero entries.
void write_matrix_triplets(const std::string& path, const Eigen::MatrixXcd& m,
                           double drop_tol = 0.0);

void write_text(const std::string& path, const std::string& text);

}  // namespace hypan
