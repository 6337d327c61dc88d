#include "eur/state_json.hpp"

#include <string>

#include "eur/error.hpp"

namespace eur {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw ParseError("state schema: " + what); }

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) schema(std::string("missing field '") + name + "'");
  return doc.at(name);
}

double real_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema(where + " must be a number");
  return v.get<double>();
}

Complex complex_number(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) schema(where + " must be a number or a [re, im] pair");
  return {real_number(v[0], where), real_number(v[1], where)};
}

CVec complex_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) schema(where + " must be a non-empty array");
  CVec out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(complex_number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Eigen::MatrixXcd complex_matrix(const json& v) {
  if (!v.is_array() || v.empty()) schema("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CVec row = complex_vector(v[static_cast<std::size_t>(i)], "matrix[" + std::to_string(i) + "]");
    if (static_cast<Eigen::Index>(row.size()) != n) schema("matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

int integer(const json& v, const char* name) {
  if (!v.is_number_integer()) schema(std::string("'") + name + "' must be an integer");
  return v.get<int>();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

template <class Vec>
json vector_json(const Vec& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

void put_levels(nlohmann::ordered_json& j, const LevelState& levels) {
  if (levels.is_pure())
    j["amplitudes"] = vector_json(levels.amplitudes());
  else
    j["matrix"] = matrix_json(levels.matrix());
}

LevelState read_levels(const json& doc, int first_level) {
  const bool has_amp = doc.contains("amplitudes"), has_mat = doc.contains("matrix");
  if (has_amp == has_mat) schema("exactly one of 'amplitudes' and 'matrix' is required");
  if (has_amp) return LevelState::pure(first_level, complex_vector(doc.at("amplitudes"), "amplitudes"));
  return LevelState::mixed(first_level, complex_matrix(doc.at("matrix")));
}

}  // namespace

AnyState state_from_json(const json& doc) {
  if (!doc.is_object()) schema("document must be an object");
  const json& fam = field(doc, "family");
  if (!fam.is_string()) schema("'family' must be a string");
  const std::string family = fam.get<std::string>();

  if (family == "grid") {
    const json& g = field(doc, "grid");
    if (!g.is_object()) schema("'grid' must be an object");
    const json& n = field(g, "n");
    if (!n.is_number_unsigned()) schema("'grid.n' must be a positive integer");
    const GridSpec grid(n.get<std::size_t>(), real_number(field(g, "x_min"), "grid.x_min"),
                        real_number(field(g, "x_max"), "grid.x_max"));
    const bool has_amp = doc.contains("amplitudes"), has_mat = doc.contains("matrix");
    if (has_amp == has_mat) schema("exactly one of 'amplitudes' and 'matrix' is required");
    if (has_amp) return GridPureState(grid, complex_vector(doc.at("amplitudes"), "amplitudes"));
    return GridMixedState(grid, complex_matrix(doc.at("matrix")));
  }
  if (family == "periodic") {
    const int first = doc.contains("first_level") ? integer(doc.at("first_level"), "first_level") : 0;
    return PeriodicState(read_levels(doc, first));
  }
  if (family == "fock") {
    const int first = doc.contains("first_level") ? integer(doc.at("first_level"), "first_level") : 0;
    return FockState(read_levels(doc, first));
  }
  if (family == "finite") return FiniteState(read_levels(doc, 0));
  schema("unknown family '" + family + "'");
}

AnyState parse_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(line, column, what);
  }
  return state_from_json(doc);
}

std::string family_name(const AnyState& state) {
  switch (state.index()) {
    case 0:
    case 1: return "grid";
    case 2: return "periodic";
    case 3: return "fock";
    default: return "finite";
  }
}

nlohmann::ordered_json state_to_json(const AnyState& state) {
  nlohmann::ordered_json j;
  j["family"] = family_name(state);
  if (const auto* p = std::get_if<GridPureState>(&state)) {
    j["grid"] = {{"n", p->grid().size()}, {"x_min", p->grid().x_min()}, {"x_max", p->grid().x_max()}};
    j["amplitudes"] = vector_json(p->amplitudes());
  } else if (const auto* m = std::get_if<GridMixedState>(&state)) {
    j["grid"] = {{"n", m->grid().size()}, {"x_min", m->grid().x_min()}, {"x_max", m->grid().x_max()}};
    j["matrix"] = matrix_json(m->matrix());
  } else if (const auto* r = std::get_if<PeriodicState>(&state)) {
    j["first_level"] = r->levels().first_level();
    put_levels(j, r->levels());
  } else if (const auto* f = std::get_if<FockState>(&state)) {
    j["first_level"] = f->levels().first_level();
    put_levels(j, f->levels());
  } else {
    put_levels(j, std::get<FiniteState>(state).levels());
  }
  return j;
}

}  // namespace eur
