#include "cubiclab/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

Rational rational_from(const Json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw ConfigError(where + ": expected a rational string or integer");
}

double real_from(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  throw ConfigError(where + ": expected a number or rational string");
}

void throw_if_any(const std::vector<std::string>& diags) {
  if (diags.empty()) return;
  std::ostringstream out;
  for (std::size_t i = 0; i < diags.size(); ++i) out << (i ? "; " : "") << diags[i];
  throw ConfigError(out.str());
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

HDecomposition rescale_decomposition(HDecomposition D, const Rational& scale) {
  for (auto& pair : D.pairs)
    for (auto& c : pair.a) c *= scale;
  return D;
}

std::vector<std::string> diagnose_form(const Json& doc, const std::string& where) {
  std::vector<std::string> out;
  if (!doc.is_object()) return {where + ": form must be an object"};
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<int>() < 1)
    out.push_back(where + ".n: must be a positive integer");
  if (!doc.contains("monomials") || !doc["monomials"].is_array()) {
    out.push_back(where + ".monomials: must be an array");
    return out;
  }
  const int n = out.empty() ? doc["n"].get<int>() : 0;
  bool any_nonzero = false;
  for (std::size_t t = 0; t < doc["monomials"].size(); ++t) {
    const auto& m = doc["monomials"][t];
    std::string loc = where + ".monomials[" + std::to_string(t) + "]";
    if (!m.is_object()) {
      out.push_back(loc + ": must be an object");
      continue;
    }
    int idx[3];
    bool ok = true;
    const char* keys[3] = {"i", "j", "k"};
    for (int s = 0; s < 3; ++s) {
      if (!m.contains(keys[s]) || !m[keys[s]].is_number_integer()) {
        out.push_back(loc + "." + keys[s] + ": missing integer index");
        ok = false;
        continue;
      }
      idx[s] = m[keys[s]].get<int>();
      if (n > 0 && (idx[s] < 1 || idx[s] > n)) {
        out.push_back(loc + "." + keys[s] + ": index out of range 1.." + std::to_string(n));
        ok = false;
      }
    }
    if (ok && !(idx[0] <= idx[1] && idx[1] <= idx[2])) out.push_back(loc + ": index order (need i <= j <= k)");
    if (!m.contains("c")) {
      out.push_back(loc + ".c: missing coefficient");
      continue;
    }
    try {
      if (rational_from(m["c"], loc + ".c") != 0) any_nonzero = true;
    } catch (const ConfigError& e) {
      out.push_back(e.what());
    }
  }
  if (out.empty() && !any_nonzero) out.push_back(where + ": all coefficients are zero");
  return out;
}

LoadedForm form_from_json(const Json& doc) {
  throw_if_any(diagnose_form(doc, "form"));
  const int n = doc["n"].get<int>();
  std::vector<RationalMonomial> terms;
  for (const auto& m : doc["monomials"])
    terms.push_back(RationalMonomial{m["i"].get<int>() - 1, m["j"].get<int>() - 1, m["k"].get<int>() - 1,
                                     rational_from(m["c"], "form")});
  auto scaled = clear_denominators(n, terms);
  return LoadedForm{std::move(scaled.form), scaled.scale};
}

Json form_to_json(const CubicForm& C) {
  Json monos = Json::array();
  for (const auto& m : C.terms())
    monos.push_back({{"i", m.i + 1}, {"j", m.j + 1}, {"k", m.k + 1}, {"c", to_string(m.c)}});
  return {{"n", C.n()}, {"monomials", monos}};
}

std::vector<std::string> diagnose_linsys(const Json& doc, const std::string& where) {
  std::vector<std::string> out;
  if (!doc.is_object()) return {where + ": linear system must be an object"};
  int r = -1, n = -1;
  if (doc.contains("r") && doc["r"].is_number_integer()) r = doc["r"].get<int>();
  else out.push_back(where + ".r: must be an integer");
  if (doc.contains("n") && doc["n"].is_number_integer()) n = doc["n"].get<int>();
  else out.push_back(where + ".n: must be an integer");
  if (r >= 0 && n >= 0 && !(1 <= r && r < n)) out.push_back(where + ": need 1 <= r < n");
  if (doc.contains("assume_irrational") && !doc["assume_irrational"].is_boolean())
    out.push_back(where + ".assume_irrational: must be a boolean");
  if (!doc.contains("rows") || !doc["rows"].is_array()) {
    out.push_back(where + ".rows: must be an array");
    return out;
  }
  const auto& rows = doc["rows"];
  if (r >= 0 && static_cast<int>(rows.size()) != r)
    out.push_back(where + ".rows: expected " + std::to_string(r) + " rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string loc = where + ".rows[" + std::to_string(i) + "]";
    if (!rows[i].is_array()) {
      out.push_back(loc + ": must be an array");
      continue;
    }
    if (n >= 0 && static_cast<int>(rows[i].size()) != n) out.push_back(loc + ": expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < rows[i].size(); ++j) try {
        real_from(rows[i][j], loc + "[" + std::to_string(j) + "]");
      } catch (const ConfigError& e) {
        out.push_back(e.what());
      }
  }
  return out;
}

LinearSystem linsys_from_json(const Json& doc) {
  throw_if_any(diagnose_linsys(doc, "linsys"));
  std::vector<LinearForm> rows;
  for (const auto& row : doc["rows"]) {
    bool all_strings = std::all_of(row.begin(), row.end(), [](const Json& v) { return v.is_string(); });
    if (all_strings) {
      std::vector<Rational> c;
      for (const auto& v : row) c.push_back(parse_rational(v.get<std::string>()));
      rows.emplace_back(std::move(c));
    } else {
      std::vector<double> c;
      for (const auto& v : row) c.push_back(real_from(v, "linsys"));
      rows.emplace_back(std::move(c));
    }
  }
  bool irr = doc.value("assume_irrational", false);
  try {
    return LinearSystem(std::move(rows), irr);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("linsys: ") + e.what());
  }
}

Json linsys_to_json(const LinearSystem& L) {
  Json rows = Json::array();
  for (const auto& row : L.rows()) {
    Json entries = Json::array();
    if (row.is_rational())
      for (const auto& c : row.rational_coeffs()) entries.push_back(to_string(c));
    else
      for (double c : row.real_coeffs()) entries.push_back(c);
    rows.push_back(entries);
  }
  return {{"r", L.r()}, {"n", L.n()}, {"rows", rows}, {"assume_irrational", L.assume_irrational()}};
}

std::vector<std::string> diagnose_decomposition(const Json& doc, const std::string& where) {
  std::vector<std::string> out;
  if (!doc.is_object()) return {where + ": decomposition must be an object"};
  int n = -1;
  if (doc.contains("n") && doc["n"].is_number_integer() && doc["n"].get<int>() >= 1) n = doc["n"].get<int>();
  else out.push_back(where + ".n: must be a positive integer");
  if (!doc.contains("pairs") || !doc["pairs"].is_array()) {
    out.push_back(where + ".pairs: must be an array");
    return out;
  }
  for (std::size_t p = 0; p < doc["pairs"].size(); ++p) {
    const auto& pair = doc["pairs"][p];
    std::string loc = where + ".pairs[" + std::to_string(p) + "]";
    if (!pair.is_object() || !pair.contains("A") || !pair["A"].is_array() || !pair.contains("B") ||
        !pair["B"].is_array()) {
      out.push_back(loc + ": needs arrays \"A\" and \"B\"");
      continue;
    }
    if (n > 0 && static_cast<int>(pair["A"].size()) != n) out.push_back(loc + ".A: expected " + std::to_string(n) + " entries");
    for (const auto& a : pair["A"]) try {
        rational_from(a, loc + ".A");
      } catch (const ConfigError& e) {
        out.push_back(e.what());
      }
    for (std::size_t t = 0; t < pair["B"].size(); ++t) {
      const auto& b = pair["B"][t];
      std::string bl = loc + ".B[" + std::to_string(t) + "]";
      if (!b.is_object() || !b.contains("i") || !b.contains("j") || !b.contains("c") || !b["i"].is_number_integer() ||
          !b["j"].is_number_integer()) {
        out.push_back(bl + ": needs integer i, j and coefficient c");
        continue;
      }
      int i = b["i"].get<int>(), j = b["j"].get<int>();
      if (n > 0 && (i < 1 || j < 1 || i > n || j > n)) out.push_back(bl + ": index out of range");
      if (i > j) out.push_back(bl + ": index order (need i <= j)");
      try {
        rational_from(b["c"], bl + ".c");
      } catch (const ConfigError& e) {
        out.push_back(e.what());
      }
    }
  }
  return out;
}

HDecomposition decomposition_from_json(const Json& doc) {
  throw_if_any(diagnose_decomposition(doc, "decomposition"));
  HDecomposition D;
  D.n = doc["n"].get<int>();
  for (const auto& pair : doc["pairs"]) {
    HPair hp;
    for (const auto& a : pair["A"]) hp.a.push_back(rational_from(a, "decomposition"));
    for (const auto& b : pair["B"])
      hp.b.push_back(QuadTerm{b["i"].get<int>() - 1, b["j"].get<int>() - 1, rational_from(b["c"], "decomposition")});
    D.pairs.push_back(std::move(hp));
  }
  return D;
}

Json decomposition_to_json(const HDecomposition& D) {
  Json pairs = Json::array();
  for (const auto& p : D.pairs) {
    Json a = Json::array(), b = Json::array();
    for (const auto& c : p.a) a.push_back(to_string(c));
    for (const auto& t : p.b) b.push_back({{"i", t.i + 1}, {"j", t.j + 1}, {"c", to_string(t.c)}});
    pairs.push_back({{"A", a}, {"B", b}});
  }
  return {{"n", D.n}, {"pairs", pairs}};
}

}  // namespace cubiclab
