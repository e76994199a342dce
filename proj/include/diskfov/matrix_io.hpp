#pragma once

// Matrix JSON format shared by every tool:
//   {"n": 3, "entries": [[[re, im], ...], ...]}   (row-major)

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "linalg.hpp"

namespace diskfov {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& x) {
  if (!x.is_square()) throw ValidationError("matrix_to_json: only square matrices are serialized");
  json rows = json::array();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < x.cols(); ++j) row.push_back({x(i, j).real(), x(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return json{{"n", x.n()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("matrix JSON: top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ValidationError("matrix JSON: missing integer field \"n\"");
  const auto n_signed = doc["n"].get<long long>();
  if (n_signed < 1) throw ValidationError("matrix JSON: \"n\" must be positive");
  const auto n = static_cast<std::size_t>(n_signed);
  if (!doc.contains("entries") || !doc["entries"].is_array())
    throw ValidationError("matrix JSON: missing array field \"entries\"");
  const auto& rows = doc["entries"];
  if (rows.size() != n)
    throw ValidationError("matrix JSON: expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));

  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw ValidationError("matrix JSON: row " + std::to_string(i) + " must have " + std::to_string(n) +
                            " entries");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = row[j];
      const std::string where = "entry [" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ValidationError("matrix JSON: " + where + " must be a [re, im] pair of numbers");
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw ValidationError("matrix JSON: " + where + " is not finite");
      x(i, j) = {re, im};
    }
  }
  return x;
}

inline Matrix parse_matrix(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("matrix JSON: parse error: ") + e.what());
  }
  return matrix_from_json(doc);
}

/// Read a matrix from a file path, or from stdin when path is "-".
inline Matrix read_matrix(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_matrix(text);
}

inline void write_matrix(const Matrix& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write matrix file: " + path);
  out << matrix_to_json(x).dump(2) << "\n";
}

}  // namespace diskfov
