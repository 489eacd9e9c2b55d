#pragma once

// Plain-text matrix format: a header line with n, then n rows of n complex
// entries written as "a+bi" (whitespace separated). Pure reals ("2.5") and
// pure imaginaries ("-3i", "i") are accepted on input.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "metriclat/opcore.hpp"

namespace metriclat {

inline complex parse_complex(const std::string& token) {
  auto fail = [&]() -> complex {
    throw error(error_kind::parse_error, "bad complex entry '" + token + "'");
  };
  if (token.empty()) return fail();
  std::string s = token;
  const bool imag_unit = s.back() == 'i' || s.back() == 'j';
  if (!imag_unit) {
    std::size_t used = 0;
    double re = 0;
    try {
      re = std::stod(s, &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != s.size()) return fail();
    return {re, 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto number = [&](const std::string& part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != part.size()) fail();
    return v;
  };
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

inline std::string format_complex(const complex& z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline Matrix read_matrix(std::istream& in) {
  long n = 0;
  if (!(in >> n) || n <= 0) throw error(error_kind::parse_error, "matrix header must be a positive n");
  Matrix m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw error(error_kind::parse_error,
                    "matrix truncated at row " + std::to_string(i) + ", column " + std::to_string(j));
      m(i, j) = parse_complex(tok);
    }
  std::string extra;
  if (in >> extra) throw error(error_kind::parse_error, "trailing data after matrix: '" + extra + "'");
  return m;
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(error_kind::parse_error, "cannot open " + path);
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  require_square(m, "write_matrix");
  out << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_complex(m(i, j));
    out << '\n';
  }
}

/// One line of comma-separated complex entries, e.g. an alpha sequence.
inline Vector parse_complex_csv(const std::string& line) {
  std::vector<complex> vals;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t\r\n");
    const auto e = item.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) throw error(error_kind::parse_error, "empty CSV field");
    vals.push_back(parse_complex(item.substr(b, e - b + 1)));
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

}  // namespace metriclat
