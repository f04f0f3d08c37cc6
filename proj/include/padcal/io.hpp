#pragma once

// JSON parsing and printing for the wire formats: scalars, characters,
// polytopes, functions, periods, paths and the generator registry file.

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>

#include "padcal/funcring.hpp"
#include "padcal/paths.hpp"
#include "padcal/periods.hpp"

namespace padcal {

using json = nlohmann::json;

inline calc_error parse_fail(const std::string& what) {
  return calc_error(errc::parse_error, what);
}

inline mpq_class parse_rational(const std::string& s) {
  try {
    mpq_class q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw parse_fail("bad rational: " + s);
  }
}

// --- scalars ------------------------------------------------------------------

inline json scalar_to_json(const padic& a) {
  if (a.is_zero()) return json{{"v", nullptr}, {"u", "0"}};
  return json{{"v", a.valuation()}, {"u", a.unit().get_str()}};
}

inline padic scalar_from_json(const field_ptr& cfg, const json& j) {
  if (j.is_string()) return padic::from_mpq(cfg, parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return padic::from_long(cfg, j.get<long>());
  if (!j.is_object() || !j.contains("v")) throw parse_fail("scalar wants {v, u}");
  if (j["v"].is_null()) return padic::zero(cfg);
  long v = j["v"].get<long>();
  mpz_class u(j["u"].get<std::string>());
  return padic::from_parts(cfg, v, std::move(u));
}

// --- characters ----------------------------------------------------------------

inline json character_to_json(const generator_registry& reg, const character& x) {
  json coords = json::array();
  for (int i = 0; i < x.arity(); ++i) {
    json c = json::object();
    for (const auto& [g, q] : x.coord(i)) c[reg.at(g).name] = q.get_str();
    coords.push_back(std::move(c));
  }
  return json{{"coords", std::move(coords)}};
}

inline exponent_vec exponents_from_json(const generator_registry& reg, const json& j) {
  exponent_vec e;
  if (!j.is_object()) throw parse_fail("character coordinate wants an object");
  for (const auto& [name, val] : j.items()) {
    auto id = reg.find(name);
    if (!id) throw parse_fail("unknown generator: " + name);
    mpq_class q = val.is_string() ? parse_rational(val.get<std::string>())
                                  : mpq_class(val.get<long>());
    if (q != 0) e[*id] = q;
  }
  return e;
}

inline character character_from_json(const generator_registry& reg, const json& j) {
  json coords;
  if (j.is_object() && j.contains("coords"))
    coords = j["coords"];
  else
    coords = json::array({j});  // arity-1 shorthand: one exponent object
  character x(static_cast<int>(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i)
    for (const auto& [g, q] : exponents_from_json(reg, coords[i]))
      x = x.mul(character::generator_power(x.arity(), static_cast<int>(i), g, q));
  return x;
}

// --- polytopes ------------------------------------------------------------------

inline json polytope_to_json(const polytope& s) {
  json ineqs = json::array();
  for (const auto& f : s.inequalities()) {
    json row = json::array();
    for (const auto& a : f.a) row.push_back(a.get_str());
    row.push_back(f.b.get_str());
    ineqs.push_back(std::move(row));
  }
  return json{{"n", s.ambient_dim()}, {"ineqs", std::move(ineqs)}};
}

inline polytope_ptr polytope_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("ineqs"))
    throw parse_fail("polytope wants {n, ineqs}");
  int n = j["n"].get<int>();
  std::vector<linform> fs;
  for (const auto& row : j["ineqs"]) {
    if (static_cast<int>(row.size()) != n + 1) throw parse_fail("inequality row length");
    linform f;
    for (int i = 0; i < n; ++i)
      f.a.push_back(row[static_cast<size_t>(i)].is_string()
                        ? mpz_class(row[static_cast<size_t>(i)].get<std::string>())
                        : mpz_class(row[static_cast<size_t>(i)].get<long>()));
    f.b = row[static_cast<size_t>(n)].is_string()
              ? mpz_class(row[static_cast<size_t>(n)].get<std::string>())
              : mpz_class(row[static_cast<size_t>(n)].get<long>());
    fs.push_back(std::move(f));
  }
  return polytope::make(n, std::move(fs));
}

/// Standard shapes by name: "interval:4", "cube:2:4", "simplex:1:4".
inline polytope_ptr polytope_from_name(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  auto arg = [&](size_t i) { return std::stol(parts.at(i)); };
  if (parts[0] == "interval" && parts.size() == 2) return polytope::interval(arg(1));
  if (parts[0] == "cube" && parts.size() == 3) return polytope::cube(static_cast<int>(arg(1)), arg(2));
  if (parts[0] == "simplex" && parts.size() == 3)
    return polytope::simplex(static_cast<int>(arg(1)), arg(2));
  throw parse_fail("unknown polytope name: " + name);
}

// --- functions ------------------------------------------------------------------

inline json function_to_json(const kfunction& f) {
  json terms = json::array();
  for (const auto& [x, c] : f.terms())
    terms.push_back(json{{"char", character_to_json(*f.registry(), x)},
                         {"coeff", scalar_to_json(c)}});
  json out{{"polytope", polytope_to_json(*f.domain())}, {"terms", std::move(terms)}};
  if (f.tail()) {
    out["tail"] = json{{"delta", f.tail()->delta.get_str()}, {"E", f.tail()->bound}};
  } else {
    out["tail"] = nullptr;
  }
  return out;
}

inline kfunction function_from_json(const registry_ptr& reg, const json& j,
                                    polytope_ptr fallback_domain = nullptr) {
  polytope_ptr dom = fallback_domain;
  json terms;
  if (j.is_object() && j.contains("terms")) {
    if (j.contains("polytope") && !j["polytope"].is_null()) dom = polytope_from_json(j["polytope"]);
    terms = j["terms"];
  } else if (j.is_object()) {
    // compact shorthand: a single character given as an exponent object
    terms = json::array({json{{"char", j}, {"coeff", 1}}});
  } else {
    throw parse_fail("function wants {polytope, terms} or a character object");
  }
  if (!dom) dom = polytope::interval(static_cast<long>(reg->config()->n_k()));
  kfunction f(reg, dom);
  for (const auto& t : terms) {
    character x = character_from_json(*reg, t.at("char"));
    padic c = t.contains("coeff") ? scalar_from_json(reg->config(), t["coeff"])
                                  : padic::one(reg->config());
    if (x.arity() != f.thick_dim())
      throw parse_fail("character arity does not match the domain");
    f.add_term(x, c);
  }
  if (j.is_object() && j.contains("tail") && !j["tail"].is_null()) {
    tail_certificate cert;
    cert.delta = parse_rational(j["tail"].at("delta").get<std::string>());
    cert.bound = j["tail"].at("E").get<long>();
    f.set_tail(cert);
  }
  return f;
}

// --- periods ---------------------------------------------------------------------

inline std::string period_symbol_name(const generator_registry& reg, int s) {
  return s == log_p_symbol ? std::string("log_p") : "l_" + reg.at(s).name;
}

inline json period_to_json(const generator_registry& reg, const period& x) {
  json num = json::array();
  for (const auto& [m, c] : x.numerator()) {
    json mono = json::object();
    for (const auto& [s, e] : m) mono[period_symbol_name(reg, s)] = e;
    num.push_back(json{{"coeff", scalar_to_json(c)}, {"monomial", std::move(mono)}});
  }
  json den = json::array();
  for (const auto& f : x.denominator()) {
    json form = json::object();
    for (const auto& [s, q] : f) form[period_symbol_name(reg, s)] = q.get_str();
    den.push_back(std::move(form));
  }
  return json{{"num", std::move(num)}, {"den", std::move(den)}};
}

/// Human form like "624/l_p + 3*l_eps".
inline std::string period_to_text(const generator_registry& reg, const period& x) {
  if (x.numerator().empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : x.numerator()) {
    if (!first) out += " + ";
    first = false;
    bool unit_coeff = !c.is_zero() && c.valuation() == 0 && c.unit() == 1 && !m.empty();
    std::string coeff;
    if (!unit_coeff) {
      if (!c.is_zero() && c.valuation() >= 0) {
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), c.config()->p,
                      static_cast<unsigned long>(c.valuation()));
        mpz_class whole = c.unit() * pw;
        mpz_class neg = (c.config()->p_pow_m - c.unit()) * pw;
        // display small integers (of either sign) plainly
        if (mpz_sizeinbase(whole.get_mpz_t(), 10) <= 12)
          coeff = whole.get_str();
        else if (mpz_sizeinbase(neg.get_mpz_t(), 10) <= 12)
          coeff = "-" + neg.get_str();
        else
          coeff = c.str();
      } else {
        coeff = c.str();
      }
    }
    std::string monos;
    for (const auto& [s, e] : m) {
      if (!monos.empty() || !coeff.empty()) monos += "*";
      monos += period_symbol_name(reg, s);
      if (e > 1) monos += "^" + std::to_string(e);
    }
    out += coeff + monos;
    if (coeff.empty() && monos.empty()) out += "1";
  }
  for (const auto& f : x.denominator()) {
    out += " / (";
    bool f1 = true;
    for (const auto& [s, q] : f) {
      if (!f1) out += " + ";
      f1 = false;
      if (q != 1) out += q.get_str() + "*";
      out += period_symbol_name(reg, s);
    }
    out += ")";
  }
  return out;
}

// --- registry --------------------------------------------------------------------

/// Registry file: {"generators":[{"name":..,"base":scalar,"torsion":bool,"order":m}]}.
inline void registry_from_json(generator_registry& reg, const json& j) {
  if (!j.is_object() || !j.contains("generators")) throw parse_fail("registry wants {generators}");
  for (const auto& g : j["generators"]) {
    std::string name = g.at("name").get<std::string>();
    if (name == "eps") continue;  // always present
    padic base = scalar_from_json(reg.config(), g.at("base"));
    bool torsion = g.value("torsion", false);
    unsigned long order = g.value("order", 0UL);
    reg.add(name, base, torsion, order);
  }
}

// --- paths -----------------------------------------------------------------------

inline target target_from_json(const field_ptr& cfg, const json& j) {
  std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "Gm" || kind == "gm") return target::gm();
  if (kind == "UnitCircle" || kind == "unit_circle") return target::unit_circle();
  if (kind == "Affine" || kind == "affine") {
    int m = j.is_object() ? j.value("arity", 1) : 1;
    return target::affine(m);
  }
  if (kind == "Disc" || kind == "disc") {
    std::vector<mpq_class> exps;
    if (j.is_object() && j.contains("radius_exp"))
      for (const auto& e : j["radius_exp"]) exps.push_back(parse_rational(e.get<std::string>()));
    if (exps.empty()) exps.push_back(0);
    return target::disc(std::move(exps));
  }
  if (kind == "Annulus" || kind == "annulus")
    return target::annulus(parse_rational(j.at("inner_exp").get<std::string>()),
                           parse_rational(j.at("outer_exp").get<std::string>()));
  if (kind == "Tate" || kind == "tate")
    return target::tate(scalar_from_json(cfg, j.at("q")));
  throw parse_fail("unknown target kind: " + kind);
}

inline path path_from_json(const registry_ptr& reg, const json& j) {
  std::string dom = j.at("domain").get<std::string>();
  domain_kind dk;
  int n;
  if (dom.rfind("cube:", 0) == 0) {
    dk = domain_kind::cube;
    n = std::stoi(dom.substr(5));
  } else if (dom.rfind("simplex:", 0) == 0) {
    dk = domain_kind::simplex;
    n = std::stoi(dom.substr(8));
  } else {
    throw parse_fail("path domain wants cube:n or simplex:n");
  }
  target tgt = target_from_json(reg->config(), j.at("target"));
  std::vector<kfunction> data;
  polytope_ptr dompoly = path_domain(reg->config(), dk, n);
  for (const auto& fj : j.at("data")) data.push_back(function_from_json(reg, fj, dompoly));
  return make_path(dk, n, tgt, std::move(data));
}

}  // namespace padcal
