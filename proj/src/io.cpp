#include "krein/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace krein::io {

namespace {

[[noreturn]] void malformed(const std::string& msg) {
  throw Error(ErrorCode::InvalidArgument, "malformed file: " + msg);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) malformed(what + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) malformed(what + " is not finite");
  return v;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_value(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write_value(os, it.value(), indent + 2);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      // matrices: one row per line, entries as inline [re, im] pairs
      const bool rows = !flat && std::all_of(j.begin(), j.end(), [](const Json& r) {
        return r.is_array() && std::all_of(r.begin(), r.end(), [](const Json& e) {
          return is_scalar(e) || (e.is_array() && std::all_of(e.begin(), e.end(), is_scalar));
        });
      });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_value(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        if (rows) {
          os << "[";
          for (std::size_t c = 0; c < j[i].size(); ++c) {
            if (c) os << ", ";
            write_value(os, j[i][c], indent);
          }
          os << "]";
        } else {
          write_value(os, j[i], indent + 2);
        }
      }
      os << "\n" << pad << "]";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(i, c).real(), m(i, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) malformed(what + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) malformed(what + " rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      malformed(what + " is ragged at row " + std::to_string(i));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row[c];
      const std::string where = what + "[" + std::to_string(i) + "][" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) malformed(where + " must be a [re, im] pair");
      m(i, c) = Complex(number(e[0], where), number(e[1], where));
    }
  }
  return m;
}

Json signature_to_json(const Signature& s) { return Json::array({s.n_plus, s.n_minus}); }

Signature signature_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    malformed(what + " must be [n_plus, n_minus]");
  }
  const int p = j[0].get<int>(), q = j[1].get<int>();
  if (p < 0 || q < 0) malformed(what + " has negative dimensions");
  return Signature(p, q);
}

Json operator_to_json(const KreinOperator& t) {
  Json j;
  j["signature_domain"] = signature_to_json(t.domain());
  j["signature_codomain"] = signature_to_json(t.codomain());
  j["matrix"] = matrix_to_json(t.matrix());
  return j;
}

KreinOperator operator_from_json(const Json& j) {
  if (!j.is_object()) malformed("top level must be an object");
  for (const char* key : {"signature_domain", "signature_codomain", "matrix"}) {
    if (!j.contains(key)) malformed(std::string("missing key '") + key + "'");
  }
  const Signature dom = signature_from_json(j["signature_domain"], "signature_domain");
  const Signature cod = signature_from_json(j["signature_codomain"], "signature_codomain");
  Matrix m = matrix_from_json(j["matrix"]);
  if (m.size() == 0) m.resize(cod.dim(), dom.dim());
  if (m.rows() != cod.dim() || m.cols() != dom.dim()) {
    malformed("matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
              " does not match signatures");
  }
  return KreinOperator(dom, cod, std::move(m));
}

std::string dump(const Json& j) {
  std::ostringstream os;
  write_value(os, j, 0);
  os << "\n";
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace krein::io
