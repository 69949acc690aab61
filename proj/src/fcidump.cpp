#include "spvqe/fcidump.hpp"

#include "spvqe/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace spvqe {

namespace {

constexpr double kSymmetryTol = 1e-10;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool is_header_end(const std::string& line) {
  const std::string u = upper(line);
  if (u.find("&END") != std::string::npos || u.find("$END") != std::string::npos) return true;
  std::string trimmed;
  for (char c : u) {
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  }
  return trimmed == "/" || trimmed == "$";
}

/// Parses `KEY=v1,v2,...` pairs from the namelist body into upper-case keys.
std::map<std::string, std::vector<std::string>> parse_namelist(const std::string& body) {
  std::map<std::string, std::vector<std::string>> out;
  std::string text = upper(body);
  for (const char* marker : {"&FCI", "&END", "$FCI", "$END"}) {
    for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker)) {
      text.replace(pos, std::string(marker).size(), " ");
    }
  }
  std::replace(text.begin(), text.end(), ',', ' ');
  std::replace(text.begin(), text.end(), '/', ' ');  // '/' terminator
  for (auto pos = text.find('='); pos != std::string::npos; pos = text.find('=', pos)) {
    text.replace(pos, 1, " = ");
    pos += 3;
  }

  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);

  std::string current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
      current = tokens[i];
      out[current];
      ++i;
      continue;
    }
    if (tokens[i] == "=" || current.empty()) {
      throw ParseError("FCIDUMP header: unexpected token '" + tokens[i] + "'");
    }
    out[current].push_back(tokens[i]);
  }
  return out;
}

int header_int(const std::map<std::string, std::vector<std::string>>& kv, const std::string& key,
               std::optional<int> fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw ParseError("FCIDUMP header: missing " + key);
  }
  if (it->second.size() != 1) throw ParseError("FCIDUMP header: " + key + " expects one value");
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second.front(), &used);
    if (used != it->second.front().size()) throw ParseError("FCIDUMP header: bad value for " + key);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("FCIDUMP header: bad value for " + key);
  }
}

double parse_fortran_double(std::string tok) {
  // Fortran writers sometimes emit 1.0D-03
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw std::invalid_argument(tok);
  return v;
}

}  // namespace

FermionIntegrals::FermionIntegrals(int n_spatial, int n_electrons, int ms2)
    : n_spatial_(n_spatial), n_electrons_(n_electrons), ms2_(ms2) {
  if (n_spatial < 1) throw StructuralError("FermionIntegrals: n_spatial must be positive");
  if (n_electrons < 0 || n_electrons > 2 * n_spatial) {
    throw StructuralError("FermionIntegrals: electron count out of range");
  }
  const auto n = static_cast<std::size_t>(n_spatial);
  h_.assign(n * n, 0.0);
  g_.assign(n * n * n * n, 0.0);
}

std::size_t FermionIntegrals::index2(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_spatial_ || j >= n_spatial_) throw StructuralError("h index out of range");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_spatial_) + static_cast<std::size_t>(j);
}

std::size_t FermionIntegrals::index4(int i, int j, int k, int l) const {
  const auto n = static_cast<std::size_t>(n_spatial_);
  return index2(i, j) * n * n + index2(k, l);
}

void FermionIntegrals::set_h(int i, int j, double v) {
  h_[index2(i, j)] = v;
  h_[index2(j, i)] = v;
}

void FermionIntegrals::set_g(int i, int j, int k, int l, double v) {
  for (const auto& [a, b, c, d] : std::array<std::array<int, 4>, 8>{{{i, j, k, l},
                                                                     {j, i, k, l},
                                                                     {i, j, l, k},
                                                                     {j, i, l, k},
                                                                     {k, l, i, j},
                                                                     {l, k, i, j},
                                                                     {k, l, j, i},
                                                                     {l, k, j, i}}}) {
    g_[index4(a, b, c, d)] = v;
  }
}

double FermionIntegrals::symmetry_violation() const {
  double worst = 0.0;
  const int n = n_spatial_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(h(i, j) - h(j, i)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = g(i, j, k, l);
          for (double w : {g(j, i, k, l), g(i, j, l, k), g(k, l, i, j)}) worst = std::max(worst, std::abs(v - w));
        }
  return worst;
}

FermionIntegrals parse_fcidump(std::istream& in) {
  std::string header;
  std::string line;
  bool started = false;
  bool ended = false;
  while (std::getline(in, line)) {
    const std::string u = upper(line);
    if (!started) {
      if (u.find("&FCI") == std::string::npos && u.find("$FCI") == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("FCIDUMP: expected &FCI namelist header");
      }
      started = true;
    }
    header += line + '\n';
    if (is_header_end(line)) {
      ended = true;
      break;
    }
  }
  if (!started) throw ParseError("FCIDUMP: empty input");
  if (!ended) throw ParseError("FCIDUMP: unterminated namelist header");

  const auto kv = parse_namelist(header);
  const int norb = header_int(kv, "NORB", std::nullopt);
  const int nelec = header_int(kv, "NELEC", 0);
  const int ms2 = header_int(kv, "MS2", 0);
  if (norb < 1) throw ParseError("FCIDUMP header: NORB must be positive");
  if (nelec < 0 || nelec > 2 * norb) throw ParseError("FCIDUMP header: NELEC out of range");

  FermionIntegrals ints(norb, nelec, ms2);
  // first value written for each canonical slot, for contradiction checks
  std::map<std::array<int, 4>, double> seen_g;
  std::map<std::array<int, 2>, double> seen_h;

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream rec(line);
    std::vector<std::string> cols;
    for (std::string tok; rec >> tok;) cols.push_back(tok);
    if (cols.empty()) continue;
    if (cols.size() != 5) {
      throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": expected 5 columns, got " +
                       std::to_string(cols.size()));
    }
    double value = 0.0;
    std::array<int, 4> idx{};
    try {
      value = parse_fortran_double(cols[0]);
      for (int c = 0; c < 4; ++c) {
        std::size_t used = 0;
        idx[static_cast<std::size_t>(c)] = std::stoi(cols[static_cast<std::size_t>(c) + 1], &used);
        if (used != cols[static_cast<std::size_t>(c) + 1].size()) throw std::invalid_argument("index");
      }
    } catch (const std::logic_error&) {
      throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": malformed '" + line + "'");
    }
    for (int v : idx) {
      if (v < 0 || v > norb) {
        throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": index " + std::to_string(v) +
                         " out of range for NORB=" + std::to_string(norb));
      }
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.set_e0(value);
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      std::array<std::array<int, 2>, 2> pairs{{{std::max(i, j), std::min(i, j)}, {std::max(k, l), std::min(k, l)}}};
      std::sort(pairs.begin(), pairs.end());
      const std::array<int, 4> key{pairs[1][0], pairs[1][1], pairs[0][0], pairs[0][1]};
      const auto [it, inserted] = seen_g.emplace(key, value);
      if (!inserted && std::abs(it->second - value) > kSymmetryTol) {
        throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": contradicts 8-fold symmetry");
      }
      ints.set_g(i - 1, j - 1, k - 1, l - 1, value);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const std::array<int, 2> key{std::max(i, j), std::min(i, j)};
      const auto [it, inserted] = seen_h.emplace(key, value);
      if (!inserted && std::abs(it->second - value) > kSymmetryTol) {
        throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": contradicts h_ij = h_ji");
      }
      ints.set_h(i - 1, j - 1, value);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy, unused
    } else {
      throw ParseError("FCIDUMP record " + std::to_string(line_no) + ": unsupported index pattern");
    }
  }
  return ints;
}

FermionIntegrals load_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP file " + path.string());
  return parse_fcidump(in);
}

}  // namespace spvqe
