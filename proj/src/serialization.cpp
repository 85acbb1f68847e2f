#include "shiftcalc/serialization.hpp"

#include <fstream>
#include <sstream>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const Json& member(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(what + ": missing \"" + key + "\"");
  return *it;
}

Integer integer_from_json(const Json& e, const std::string& where) {
  if (e.is_number_integer()) {
    if (e.is_number_unsigned()) return Integer(std::to_string(e.get<std::uint64_t>()));
    return Integer(std::to_string(e.get<std::int64_t>()));
  }
  if (e.is_string()) {
    Integer v;
    if (v.set_str(e.get<std::string>(), 10) == 0) return v;
  }
  throw ParseError(where + " is not an integer");
}

Json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Labels labels_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of labels");
  Labels out;
  for (const auto& e : j) {
    if (e.is_string()) out.push_back(e.get<std::string>());
    else if (e.is_number_integer()) out.push_back(std::to_string(e.get<long long>()));
    else throw ParseError(what + " contains a label that is neither string nor integer");
  }
  return out;
}

Json count_matrix_to_json(const CountMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Bare nested arrays or a full matrix document.
IntMatrix matrix_or_rows(const Json& j, const std::string& what) {
  if (j.is_array()) return matrix_from_json(Json{{"entries", j}}, what, true);
  return matrix_from_json(j, what, true);
}

Json complex_matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(what + ": expected " + std::to_string(n) + " rows");
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != n)
      throw ParseError(what + ": row " + std::to_string(i) + " must have " +
                       std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) {
      const Json& z = row[k];
      double re = 0.0, im = 0.0;
      if (z.is_number()) {
        re = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        re = z[0].get<double>();
        im = z[1].get<double>();
      } else {
        throw ParseError(what + ": entry (" + std::to_string(i) + "," + std::to_string(k) +
                         ") must be [re, im]");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& name) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(integer_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

IntMatrix matrix_from_json(const Json& j, const std::string& what, bool require_nonnegative) {
  const Json& entries = member(j, "entries", what);
  if (!entries.is_array() || entries.empty())
    throw ParseError(what + ": \"entries\" must be a non-empty array of rows");
  std::size_t cols = 0;
  if (j.contains("cols")) {
    if (!j["cols"].is_number_unsigned()) throw ParseError(what + ": \"cols\" must be a count");
    cols = j["cols"].get<std::size_t>();
  } else if (entries[0].is_array()) {
    cols = entries[0].size();
  }
  if (j.contains("rows")) {
    if (!j["rows"].is_number_unsigned()) throw ParseError(what + ": \"rows\" must be a count");
    if (j["rows"].get<std::size_t>() != entries.size())
      throw ParseError(what + ": \"rows\" is " + std::to_string(j["rows"].get<std::size_t>()) +
                       " but \"entries\" has " + std::to_string(entries.size()) + " rows");
  }
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& row = entries[i];
    if (!row.is_array()) throw ParseError(what + ": row " + std::to_string(i) + " is not an array");
    if (row.size() != cols)
      throw ParseError(what + ": row " + std::to_string(i) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(cols));
    std::vector<Integer> values;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::string where =
          what + ": entry (" + std::to_string(i) + "," + std::to_string(k) + ")";
      Integer v = integer_from_json(row[k], where);
      if (require_nonnegative && sgn(v) < 0)
        throw DomainError(where + " is negative (" + v.get_str() + ")");
      values.push_back(std::move(v));
    }
    rows.push_back(std::move(values));
  }
  if (cols == 0) throw ParseError(what + ": rows must not be empty");
  return IntMatrix::from_rows(rows);
}

IntMatrix parse_matrix_file(const std::string& path, bool require_nonnegative) {
  return matrix_from_json(read_json_file(path), path, require_nonnegative);
}

Json witness_to_json(const SEWitness& w) {
  return Json{{"schema", kSchema},      {"a", matrix_to_json(w.a)}, {"b", matrix_to_json(w.b)},
              {"r", matrix_to_json(w.r)}, {"s", matrix_to_json(w.s)}, {"lag", w.lag}};
}

SEWitness witness_from_json(const Json& j) {
  const Json& lag = member(j, "lag", "witness");
  if (!lag.is_number_integer() || lag.get<long long>() < 0)
    throw ParseError("witness: \"lag\" must be a nonnegative integer");
  return SEWitness{matrix_or_rows(member(j, "a", "witness"), "a"),
                   matrix_or_rows(member(j, "b", "witness"), "b"),
                   matrix_or_rows(member(j, "r", "witness"), "r"),
                   matrix_or_rows(member(j, "s", "witness"), "s"),
                   static_cast<unsigned>(lag.get<long long>())};
}

Json polynomial_to_json(const IntPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(integer_to_json(c));
  return Json{{"text", p.to_string()}, {"coefficients", std::move(coeffs)}};
}

Json group_to_json(const AbelianGroup& g) {
  Json torsion = Json::array();
  for (const auto& t : g.torsion) torsion.push_back(integer_to_json(t));
  return Json{{"text", g.to_string()}, {"free_rank", g.free_rank}, {"torsion", std::move(torsion)}};
}

Json correspondence_to_json(const GraphCorrespondence& c) {
  Json factors = Json::array();
  for (const auto& f : c.factors()) factors.push_back(count_matrix_to_json(f));
  return Json{{"left_index", c.left_index()},
              {"right_index", c.right_index()},
              {"dims", count_matrix_to_json(c.dims())},
              {"factors", std::move(factors)}};
}

GraphCorrespondence correspondence_from_json(const Json& j) {
  Labels left = labels_from_json(member(j, "left_index", "correspondence"), "left_index");
  Labels right = labels_from_json(member(j, "right_index", "correspondence"), "right_index");
  if (j.contains("factors")) {
    std::vector<CountMatrix> factors;
    for (const auto& f : j["factors"])
      factors.push_back(CountMatrix::from_int(matrix_or_rows(f, "factor")));
    if (factors.empty()) throw ParseError("correspondence: \"factors\" is empty");
    GraphCorrespondence c = GraphCorrespondence::from_factors(std::move(factors), left, right);
    if (j.contains("dims") && !(CountMatrix::from_int(matrix_or_rows(j["dims"], "dims")) == c.dims()))
      throw ParseError("correspondence: \"dims\" is not the product of \"factors\"");
    return c;
  }
  return GraphCorrespondence::from_matrix(matrix_or_rows(member(j, "dims", "correspondence"), "dims"),
                                          left, right);
}

Json block_unitary_to_json(const BlockUnitary& u) {
  const GraphCorrespondence& s = u.source();
  Json blocks = Json::object();
  for (std::size_t v = 0; v < s.left_size(); ++v)
    for (std::size_t w = 0; w < s.right_size(); ++w)
      if (s.block_dim(v, w) > 0)
        blocks[std::to_string(v) + "," + std::to_string(w)] =
            complex_matrix_to_json(u.block(v, w));
  return Json{{"left_index", s.left_index()},
              {"right_index", s.right_index()},
              {"dims", count_matrix_to_json(s.dims())},
              {"blocks", std::move(blocks)}};
}

BlockUnitary block_unitary_from_json(const Json& j) {
  Labels left = labels_from_json(member(j, "left_index", "block unitary"), "left_index");
  Labels right = labels_from_json(member(j, "right_index", "block unitary"), "right_index");
  const IntMatrix dims = matrix_or_rows(member(j, "dims", "block unitary"), "dims");
  const GraphCorrespondence c = GraphCorrespondence::from_matrix(dims, left, right);
  const Json& blocks = member(j, "blocks", "block unitary");
  if (!blocks.is_object()) throw ParseError("block unitary: \"blocks\" must be an object");
  std::vector<ComplexMatrix> out;
  for (std::size_t v = 0; v < c.left_size(); ++v) {
    for (std::size_t w = 0; w < c.right_size(); ++w) {
      const std::string key = std::to_string(v) + "," + std::to_string(w);
      const std::size_t n = c.block_dim(v, w);
      auto it = blocks.find(key);
      if (it == blocks.end()) {
        if (n > 0) throw ParseError("block unitary: missing block \"" + key + "\"");
        out.emplace_back(0, 0);
      } else {
        out.push_back(complex_matrix_from_json(*it, n, "block \"" + key + "\""));
      }
    }
  }
  for (const auto& [key, value] : blocks.items()) {
    (void)value;
    std::size_t v = 0, w = 0;
    char comma = 0;
    std::istringstream in(key);
    if (!(in >> v >> comma >> w) || comma != ',' || v >= c.left_size() || w >= c.right_size())
      throw ParseError("block unitary: unknown block \"" + key + "\"");
  }
  return BlockUnitary(c, c, std::move(out));
}

Json object_to_json(const ObjectPair& obj) {
  return Json{{"matrix", matrix_to_json(obj.matrix())}, {"index", obj.index()}};
}

ObjectPair object_from_json(const Json& j) {
  const IntMatrix a = matrix_or_rows(member(j, "matrix", "object"), "matrix");
  Labels index = j.contains("index") ? labels_from_json(j["index"], "index") : Labels{};
  return ObjectPair::from_matrix(a, std::move(index));
}

Json one_arrow_to_json(const OneArrow& a) {
  return Json{{"left", object_to_json(a.left())},
              {"right", object_to_json(a.right())},
              {"f", correspondence_to_json(a.f())},
              {"phi", block_unitary_to_json(a.phi())}};
}

OneArrow one_arrow_from_json(const Json& j) {
  return OneArrow(object_from_json(member(j, "left", "arrow")),
                  object_from_json(member(j, "right", "arrow")),
                  correspondence_from_json(member(j, "f", "arrow")),
                  block_unitary_from_json(member(j, "phi", "arrow")));
}

Json shift_to_json(const AlignedShiftData& d) {
  return Json{{"schema", kSchema},
              {"lag", d.lag()},
              {"x", object_to_json(d.x_obj())},
              {"y", object_to_json(d.y_obj())},
              {"m", correspondence_to_json(d.m_arrow().f())},
              {"n", correspondence_to_json(d.n_arrow().f())},
              {"phi_m", block_unitary_to_json(d.m_arrow().phi())},
              {"phi_n", block_unitary_to_json(d.n_arrow().phi())},
              {"psi_x", block_unitary_to_json(d.psi_x())},
              {"psi_y", block_unitary_to_json(d.psi_y())}};
}

AlignedShiftData shift_from_json(const Json& j) {
  const Json& lag = member(j, "lag", "shift");
  if (!lag.is_number_integer() || lag.get<long long>() < 1)
    throw ParseError("shift: \"lag\" must be a positive integer");
  ObjectPair x = object_from_json(member(j, "x", "shift"));
  ObjectPair y = object_from_json(member(j, "y", "shift"));
  OneArrow m(x, y, correspondence_from_json(member(j, "m", "shift")),
             block_unitary_from_json(member(j, "phi_m", "shift")));
  OneArrow n(y, x, correspondence_from_json(member(j, "n", "shift")),
             block_unitary_from_json(member(j, "phi_n", "shift")));
  return AlignedShiftData(std::move(x), std::move(y), std::move(m), std::move(n),
                          block_unitary_from_json(member(j, "psi_x", "shift")),
                          block_unitary_from_json(member(j, "psi_y", "shift")),
                          static_cast<unsigned>(lag.get<long long>()));
}

Json path_to_json(const UnitaryPath& p) {
  Json samples = Json::array();
  for (const auto& s : p.samples)
    samples.push_back(Json{{"t", s.t}, {"u", block_unitary_to_json(s.u)}});
  Json out{{"samples", std::move(samples)}};
  if (p.generator) {
    Json gen = Json::array();
    for (const auto& h : *p.generator) gen.push_back(complex_matrix_to_json(h));
    out["generator"] = std::move(gen);
  }
  return out;
}

Json homotopy_to_json(const ArrowHomotopy& h) {
  return Json{{"f_arrow", one_arrow_to_json(h.f_arrow)},
              {"g_arrow", one_arrow_to_json(h.g_arrow)},
              {"carrier", correspondence_to_json(h.carrier)},
              {"h0", block_unitary_to_json(h.h0)},
              {"h1", block_unitary_to_json(h.h1)},
              {"path", path_to_json(h.path)}};
}

Json bundle_to_json(const HomotopyShiftBundle& b) {
  return Json{{"schema", kSchema},
              {"shift", shift_to_json(b.shift)},
              {"x_homotopy", homotopy_to_json(b.x_homotopy)},
              {"y_homotopy", homotopy_to_json(b.y_homotopy)}};
}

}  // namespace shiftcalc
