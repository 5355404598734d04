#include "k3dyn/lattice.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace k3dyn::lattice {

IntersectionForm::IntersectionForm(IntMatrix gram) : gram_(std::move(gram)) {
  const std::size_t n = gram_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (gram_[i].size() != n) throw Error(ErrorKind::not_symmetric, "Gram matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (gram_[i][j] != gram_[j][i])
        throw Error(ErrorKind::not_symmetric, "Gram matrix is not symmetric at (" + std::to_string(i) + "," +
                                                  std::to_string(j) + ")");
  }
}

bool IntersectionForm::is_even() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (gram_[i][i] % 2 != 0) return false;
  return true;
}

void IntersectionForm::check_size(std::size_t n) const {
  if (n != rank())
    throw Error(ErrorKind::invalid_argument,
                "class has " + std::to_string(n) + " coordinates, lattice rank is " + std::to_string(rank()));
}

IntersectionForm IntersectionForm::wehler() { return IntersectionForm({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}); }

RationalClass make_class(std::initializer_list<long> coords) {
  RationalClass c;
  for (long x : coords) c.coords.emplace_back(x);
  return c;
}

CurveConfig::CurveConfig(IntersectionForm f, std::vector<RationalClass> c, std::vector<long long> k)
    : form(std::move(f)), classes(std::move(c)), k_dot(std::move(k)) {
  if (classes.size() != k_dot.size())
    throw Error(ErrorKind::invalid_argument, "classes and k_dot differ in length");
  for (const auto& cls : classes) {
    if (cls.size() != form.rank()) throw Error(ErrorKind::invalid_argument, "curve class has wrong rank");
    for (const auto& x : cls.coords)
      if (x.get_den() != 1) throw Error(ErrorKind::invalid_argument, "curve classes must be integral");
  }
}

IntMatrix CurveConfig::induced_gram() const {
  const std::size_t n = classes.size();
  IntMatrix g(n, std::vector<long long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational p = pairing(form, classes[i], classes[j]);
      g[i][j] = g[j][i] = p.get_num().get_si();
    }
  return g;
}

CurveConfig CurveConfig::restrict_to(std::span<const std::size_t> indices) const {
  IntMatrix full = induced_gram();
  IntMatrix sub(indices.size(), std::vector<long long>(indices.size()));
  std::vector<long long> k;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = 0; b < indices.size(); ++b) sub[a][b] = full[indices[a]][indices[b]];
    k.push_back(k_dot[indices[a]]);
  }
  return from_gram(std::move(sub), std::move(k));
}

CurveConfig CurveConfig::from_gram(IntMatrix gram, std::vector<long long> k_dot) {
  const std::size_t n = gram.size();
  std::vector<RationalClass> unit(n);
  for (std::size_t i = 0; i < n; ++i) {
    unit[i].coords.assign(n, Rational(0));
    unit[i].coords[i] = 1;
  }
  return CurveConfig(IntersectionForm(std::move(gram)), std::move(unit), std::move(k_dot));
}

Signature signature(const IntersectionForm& form) {
  const std::size_t n = form.rank();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(form(i, j));

  auto add_to = [&](std::size_t dst, std::size_t src, const Rational& f) {
    // row_dst += f row_src, then col_dst += f col_src; keeps symmetry.
    for (std::size_t j = 0; j < n; ++j) a[dst][j] += f * a[src][j];
    for (std::size_t i = 0; i < n; ++i) a[i][dst] += f * a[i][src];
  };

  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_with = n;
      for (std::size_t j = k + 1; j < n && swap_with == n; ++j)
        if (a[j][j] != 0) swap_with = j;
      if (swap_with != n) {
        std::swap(a[k], a[swap_with]);
        for (auto& row : a) std::swap(row[k], row[swap_with]);
      } else {
        for (std::size_t j = k + 1; j < n; ++j)
          if (a[k][j] != 0) {
            add_to(k, j, Rational(1));  // a[k][k] becomes 2 a[k][j]
            break;
          }
      }
    }
    const Rational pivot = a[k][k];
    if (pivot == 0) {
      ++sig.zero;  // the whole row is zero past k
      continue;
    }
    (sgn(pivot) > 0 ? sig.pos : sig.neg)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      add_to(i, k, Rational(-a[i][k] / pivot));
    }
  }
  return sig;
}

bool is_negative_definite(const IntersectionForm& form) {
  return signature(form).neg == static_cast<int>(form.rank());
}

Genus arithmetic_genus(long long c_sq, long long k_dot_c) {
  Rational v(static_cast<long>(k_dot_c + c_sq), 2L);
  v.canonicalize();
  v += 1;
  return {v, (k_dot_c + c_sq) % 2 == 0};
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::minus_two: return "minus_two";
    case CurveKind::minus_one: return "minus_one";
    case CurveKind::other: return "other";
  }
  return "other";
}

CurveKind classify_null_curve(long long c_sq, long long k_dot_c) {
  if (k_dot_c == 0 && c_sq == -2) return CurveKind::minus_two;
  if (k_dot_c == -1 && c_sq == -1) return CurveKind::minus_one;
  return CurveKind::other;
}

std::vector<std::size_t> null_locus(const RationalClass& alpha, const CurveConfig& curves) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (pairing(curves.form, alpha, curves.classes[i]) == 0) out.push_back(i);
  return out;
}

const char* to_string(HodgeVerdict verdict) {
  switch (verdict) {
    case HodgeVerdict::zero: return "zero";
    case HodgeVerdict::negative: return "negative";
    case HodgeVerdict::violation: return "violation";
  }
  return "violation";
}

HodgeVerdict hodge_index_check(const IntersectionForm& form, const RationalClass& alpha, const RationalClass& v) {
  if (sgn(pairing(form, alpha, alpha)) <= 0)
    throw Error(ErrorKind::precondition, "hodge_index_check: alpha must have positive square");
  if (pairing(form, alpha, v) != 0)
    throw Error(ErrorKind::precondition, "hodge_index_check: v must be orthogonal to alpha");
  if (v.is_zero()) return HodgeVerdict::zero;
  return sgn(pairing(form, v, v)) < 0 ? HodgeVerdict::negative : HodgeVerdict::violation;
}

ArtinResult artin_test(const CurveConfig& curves, long r_max) {
  if (r_max < 1) throw Error(ErrorKind::invalid_argument, "artin_test: r_max must be positive");
  const IntMatrix g = curves.induced_gram();
  if (!is_negative_definite(IntersectionForm(g)))
    throw Error(ErrorKind::not_negative_definite, "artin_test: intersection matrix is not negative definite");

  const std::size_t n = g.size();
  ArtinResult result;
  result.r_max = r_max;
  std::vector<long> r(n, 0);
  while (true) {
    // odometer increment, last index fastest
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (r[pos] < r_max) {
        ++r[pos];
        break;
      }
      r[pos] = 0;
      if (pos == 0) return result;
    }
    if (n == 0) return result;
    ++result.combinations_checked;

    long long z_sq = 0;
    long long kz = 0;
    for (std::size_t i = 0; i < n; ++i) {
      kz += r[i] * curves.k_dot[i];
      for (std::size_t j = 0; j < n; ++j) z_sq += r[i] * r[j] * g[i][j];
    }
    Genus pa = arithmetic_genus(z_sq, kz);
    if (sgn(pa.value) > 0) {
      result.pass = false;
      result.witness = r;
      result.witness_genus = pa.value;
      return result;
    }
  }
}

long long euler_char_k3(long long l_sq) {
  if (l_sq % 2 != 0) throw Error(ErrorKind::invalid_argument, "euler_char_k3: the K3 lattice is even, L^2 must be even");
  return l_sq / 2 + 2;
}

const char* to_string(KummerVerdict verdict) {
  return verdict == KummerVerdict::not_kummer ? "not_kummer" : "inconclusive";
}

KummerVerdict kummer_screen(int picard_rank) {
  if (picard_rank < 0 || picard_rank > 20)
    throw Error(ErrorKind::invalid_argument, "kummer_screen: Picard rank of a K3 surface lies in [0, 20]");
  return picard_rank < 17 ? KummerVerdict::not_kummer : KummerVerdict::inconclusive;
}

const char* to_string(ContractionVerdict verdict) {
  switch (verdict) {
    case ContractionVerdict::rational_singularities: return "contractible_with_rational_singularities";
    case ContractionVerdict::contractible_only: return "contractible_only";
    case ContractionVerdict::not_contractible: return "not_contractible";
  }
  return "not_contractible";
}

ContractionReport contraction_report(const RationalClass& alpha, const CurveConfig& curves, long r_max) {
  ContractionReport report;
  report.r_max = r_max;
  report.alpha_square = pairing(curves.form, alpha, alpha);
  if (sgn(report.alpha_square) <= 0)
    throw Error(ErrorKind::precondition, "contraction_report: alpha must have positive square");
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (sgn(pairing(curves.form, alpha, curves.classes[i])) < 0)
      throw Error(ErrorKind::precondition, "contraction_report: alpha is not nef, negative on curve " + std::to_string(i));

  report.null_curves = null_locus(alpha, curves);
  const IntMatrix g = curves.induced_gram();
  const auto& nulls = report.null_curves;

  // union-find over positions in `nulls`
  std::vector<std::size_t> parent(nulls.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < nulls.size(); ++a)
    for (std::size_t b = a + 1; b < nulls.size(); ++b)
      if (g[nulls[a]][nulls[b]] != 0) parent[find(a)] = find(b);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of(nulls.size(), SIZE_MAX);
  for (std::size_t a = 0; a < nulls.size(); ++a) {
    std::size_t root = find(a);
    if (group_of[root] == SIZE_MAX) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(nulls[a]);
  }

  for (auto& members : groups) {
    ComponentReport comp;
    comp.curves = members;
    for (std::size_t i : members) comp.kinds.push_back(classify_null_curve(g[i][i], curves.k_dot[i]));
    CurveConfig sub = curves.restrict_to(members);
    comp.signature = signature(sub.form);
    comp.negative_definite = comp.signature.neg == static_cast<int>(members.size());
    if (comp.negative_definite) {
      comp.artin = artin_test(sub, r_max);
      comp.verdict = comp.artin->pass ? ContractionVerdict::rational_singularities : ContractionVerdict::contractible_only;
    }
    report.components.push_back(std::move(comp));
  }
  return report;
}

namespace {

using nlohmann::json;

long long as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(ErrorKind::invalid_argument, where + ": integers only");
  return v.get<long long>();
}

std::vector<long long> integer_row(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorKind::invalid_argument, where + ": expected an array");
  std::vector<long long> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_integer(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

ContractionInput parse_contraction_input(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, std::string("contraction input: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::invalid_argument, "contraction input must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "gram" && key != "classes" && key != "k_dot" && key != "alpha")
      throw Error(ErrorKind::invalid_argument, "contraction input: unknown key '" + key + "'");
  for (const char* key : {"gram", "classes", "k_dot"})
    if (!doc.contains(key)) throw Error(ErrorKind::invalid_argument, std::string("contraction input: missing '") + key + "'");

  IntMatrix gram;
  for (std::size_t i = 0; i < doc["gram"].size(); ++i) gram.push_back(integer_row(doc["gram"][i], "gram"));
  IntersectionForm form(std::move(gram));

  std::vector<RationalClass> classes;
  for (std::size_t i = 0; i < doc["classes"].size(); ++i) {
    RationalClass c;
    for (long long x : integer_row(doc["classes"][i], "classes")) c.coords.emplace_back(static_cast<long>(x));
    classes.push_back(std::move(c));
  }
  std::vector<long long> k_dot = integer_row(doc["k_dot"], "k_dot");

  RationalClass alpha;
  if (doc.contains("alpha")) {
    for (long long x : integer_row(doc["alpha"], "alpha")) alpha.coords.emplace_back(static_cast<long>(x));
  } else {
    alpha.coords.assign(form.rank(), Rational(1));
  }
  if (alpha.size() != form.rank()) throw Error(ErrorKind::invalid_argument, "alpha has wrong rank");
  return {CurveConfig(std::move(form), std::move(classes), std::move(k_dot)), std::move(alpha)};
}

std::string report_to_json(const ContractionReport& report, int indent) {
  json out;
  out["alpha_square"] = k3dyn::to_string(report.alpha_square);
  out["r_max"] = report.r_max;
  out["null_curves"] = report.null_curves;
  out["components"] = json::array();
  for (const auto& comp : report.components) {
    json c;
    c["curves"] = comp.curves;
    json kinds = json::array();
    for (auto k : comp.kinds) kinds.push_back(to_string(k));
    c["kinds"] = kinds;
    c["signature"] = {comp.signature.pos, comp.signature.zero, comp.signature.neg};
    c["negative_definite"] = comp.negative_definite;
    if (comp.artin) {
      json a;
      a["pass"] = comp.artin->pass;
      a["r_max"] = comp.artin->r_max;
      a["combinations_checked"] = comp.artin->combinations_checked;
      if (comp.artin->witness) a["witness"] = *comp.artin->witness;
      if (comp.artin->witness_genus) a["witness_genus"] = k3dyn::to_string(*comp.artin->witness_genus);
      c["artin"] = a;
    }
    c["verdict"] = to_string(comp.verdict);
    out["components"].push_back(c);
  }
  return out.dump(indent);
}

}  // namespace k3dyn::lattice
