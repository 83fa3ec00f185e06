#include "hypan/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypan/errors.hpp"
#include "hypan/expr.hpp"

namespace hypan {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ConfigFile parse_ini(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw config_error("line " + std::to_string(lineno) + ": unterminated section header");
      cfg.push_back(ConfigSection{trim(s.substr(1, s.size() - 2)), lineno, {}});
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key=value");
    if (cfg.empty())
      throw config_error("line " + std::to_string(lineno) + ": entry before any [section]");
    cfg.back().entries.push_back(
        ConfigEntry{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), lineno});
  }
  return cfg;
}

ConfigFile load_ini(const std::string& path) { return parse_ini(read_file(path)); }

const ConfigSection* find_section(const ConfigFile& cfg, const std::string& name) {
  for (const auto& s : cfg)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigEntry* find_entry(const ConfigSection& sec, const std::string& key) {
  for (const auto& e : sec.entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::optional<std::string> lookup_value(const ConfigFile& cfg, const std::string& section,
                                        const std::string& key) {
  const ConfigSection* sec = find_section(cfg, section);
  if (!sec) return std::nullopt;
  const ConfigEntry* e = find_entry(*sec, key);
  if (!e) return std::nullopt;
  return e->value;
}

std::string require_value(const ConfigFile& cfg, const std::string& section,
                          const std::string& key) {
  auto v = lookup_value(cfg, section, key);
  if (!v) throw config_error("missing [" + section + "] " + key);
  return *v;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ','))
    if (!part.empty()) out.push_back(parse_double(part));
  return out;
}

int parse_int(const std::string& text) {
  try {
    size_t pos = 0;
    int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("not an integer: '" + text + "'");
  }
}

double parse_double(const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("not a number: '" + text + "'");
  }
}

SystemSymbol load_system(const std::string& path) {
  ConfigFile cfg = load_ini(path);
  std::string name = require_value(cfg, "system", "name");
  int dim = parse_int(require_value(cfg, "system", "dimension"));
  int sd = parse_int(require_value(cfg, "system", "space_dim"));
  if (dim < 1 || dim > 8) throw config_error(path + ": dimension out of range");
  if (sd < 1 || sd > 8) throw config_error(path + ": space_dim out of range");

  SystemSymbol sys(dim, sd, name);
  const Layout& lay = sys.layout();
  std::vector<std::string> vars = lay.names();

  for (int j = 0; j < sd; ++j) {
    std::string secname = "A" + std::to_string(j + 1);
    const ConfigSection* sec = find_section(cfg, secname);
    if (!sec) throw config_error(path + ": missing [" + secname + "]");
    for (int r = 0; r < dim; ++r) {
      const ConfigEntry* row = find_entry(*sec, "row" + std::to_string(r + 1));
      if (!row)
        throw config_error(path + ": [" + secname + "] missing row" + std::to_string(r + 1));
      std::vector<std::string> cells = split(row->value, ',');
      if (static_cast<int>(cells.size()) != dim)
        throw config_error(path + ": line " + std::to_string(row->line) + ": expected " +
                           std::to_string(dim) + " entries");
      for (int c = 0; c < dim; ++c) {
        Polynomial p = parse_polynomial(cells[static_cast<size_t>(c)], vars, row->line - 1);
        for (const auto& [m, coeffv] : p.terms()) {
          bool covar = m[static_cast<size_t>(lay.tau())] != 0;
          for (int q = 0; q < sd; ++q) covar = covar || m[static_cast<size_t>(lay.xi(q))] != 0;
          if (covar)
            throw config_error(path + ": line " + std::to_string(row->line) +
                               ": coefficient entries may only depend on t, x");
        }
        sys.coeff(j)(r, c) = p;
      }
    }
  }
  return sys;
}

ManifoldChart load_chart(const std::string& path) {
  ConfigFile cfg = load_ini(path);
  int sd = parse_int(require_value(cfg, "chart", "space_dim"));
  if (sd < 1 || sd > 8) throw config_error(path + ": space_dim out of range");
  ManifoldChart chart;
  chart.layout = Layout{sd};
  std::vector<std::string> vars = chart.layout.names();
  const ConfigSection* sec = find_section(cfg, "chart");
  for (int k = 1;; ++k) {
    const ConfigEntry* e = find_entry(*sec, "phi" + std::to_string(k));
    if (!e) break;
    chart.defining_functions.push_back(parse_polynomial(e->value, vars, e->line - 1));
  }
  if (chart.defining_functions.empty())
    throw config_error(path + ": chart needs at least phi1");
  return chart;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_complex(cplx v) {
  if (v.imag() == 0.0) return format_double(v.real());
  std::string s = format_double(v.real());
  s += v.imag() < 0 ? "-" : "+";
  s += format_double(std::abs(v.imag()));
  s += "i";
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_matrix_triplets(const std::string& path, const Eigen::MatrixXcd& m, double drop_tol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > drop_tol)
        out << i << " " << j << " " << format_double(m(i, j).real()) << " "
            << format_double(m(i, j).imag()) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << text;
}

}  // namespace hypan
