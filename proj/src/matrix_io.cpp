#include "hyperep/matrix_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hyperep {

namespace {

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re") ||
      !j.contains("im")) {
    throw std::invalid_argument("matrix JSON must contain rows, cols, re, im");
  }
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != rows * cols || im.size() != rows * cols) {
    throw std::invalid_argument("matrix JSON entry arrays do not match rows*cols");
  }
  std::vector<Complex> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = Complex(re[k], im[k]);
  return ComplexMatrix(rows, cols, std::move(entries));
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(m.rows() * m.cols());
  im.reserve(m.rows() * m.cols());
  for (const Complex& z : m.entries()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

}  // namespace

ComplexMatrix load_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  nlohmann::json j;
  in >> j;
  return matrix_from_json(j);
}

ComplexMatrix matrix_from_json_text(const std::string& text) {
  return matrix_from_json(nlohmann::json::parse(text));
}

std::string matrix_to_json_text(const ComplexMatrix& m) { return matrix_to_json(m).dump(2); }

void save_matrix_json(const ComplexMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write matrix file: " + path);
  out << matrix_to_json_text(m) << '\n';
}

}  // namespace hyperep
