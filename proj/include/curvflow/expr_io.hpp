#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "curvflow/rational_fn.hpp"

namespace curvflow {

/// Syntax or evaluation error while reading an expression; `position` is a 0-based
/// byte offset into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Text plus the basis its variables live in.
struct ExprSource {
  std::string text;
  Basis basis = Basis::Lambda;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, Basis basis) : s_(text), basis_(basis) {}

  RationalFn parse() {
    RationalFn v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  static constexpr unsigned kMaxExponent = 64;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  // expr := term (('+' | '-') term)*
  RationalFn expr() {
    RationalFn v = term();
    for (;;) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }

  // term := unary (('*' | '/') unary)*
  RationalFn term() {
    RationalFn v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (peek() == '/') {
        std::size_t at = pos_;
        ++pos_;
        RationalFn d = unary();
        if (d.is_zero()) fail_at("division by zero", at);
        v = v / d;
      } else {
        return v;
      }
    }
  }

  // unary := ('-' | '+') unary | power
  RationalFn unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  // power := primary ('^' power)?   right-associative, exponent a constant integer
  RationalFn power() {
    RationalFn base = primary();
    if (peek() != '^') return base;
    ++pos_;
    std::size_t at = pos_;
    skip_ws();
    at = pos_;
    RationalFn e = power();
    return base.pow(exponent_value(e, at));
  }

  unsigned exponent_value(const RationalFn& e, std::size_t at) const {
    if (!e.is_constant()) fail_at("exponent must be a constant", at);
    Rational v = e.is_zero() ? Rational(0) : e.num().constant_term() / e.den().constant_term();
    if (v.get_den() != 1) fail_at("exponent must be an integer", at);
    if (v < 0) fail_at("exponent must be nonnegative", at);
    if (v > kMaxExponent) fail_at("exponent overflow (limit " + std::to_string(kMaxExponent) + ")", at);
    return static_cast<unsigned>(v.get_num().get_ui());
  }

  RationalFn primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFn v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Integer z(std::string(s_.substr(start, pos_ - start)));
      return RationalFn::constant(Rational(z), basis_);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return identifier(s_.substr(start, pos_ - start), start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  RationalFn identifier(std::string_view name, std::size_t at) const {
    if (basis_ == Basis::Lambda) {
      BivarPoly l1 = BivarPoly::variable(0), l2 = BivarPoly::variable(1);
      if (name == "l1") return RationalFn(l1);
      if (name == "l2") return RationalFn(l2);
      // Shorthands for the usual symmetric functions.
      if (name == "H") return RationalFn(l1 + l2);
      if (name == "A") return RationalFn(l1 * l1 + l2 * l2);
      if (name == "K") return RationalFn(l1 * l2);
    } else {
      BivarPoly H = BivarPoly::variable(0, Basis::HA), A = BivarPoly::variable(1, Basis::HA);
      if (name == "H") return RationalFn(H);
      if (name == "A") return RationalFn(A);
      if (name == "K") return RationalFn((H * H - A).scaled(Rational(1, 2)));
    }
    fail_at("unknown variable '" + std::string(name) + "' for the " + basis_name(basis_) + " basis", at);
  }

  std::string_view s_;
  Basis basis_;
  std::size_t pos_ = 0;
};

inline std::string var_name(Basis b, int index) {
  if (b == Basis::Lambda) return index == 0 ? "l1" : "l2";
  return index == 0 ? "H" : "A";
}

inline std::string monomial_text(Basis b, const Monomial& m) {
  std::string out;
  auto add = [&](int index, unsigned e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += var_name(b, index);
    if (e > 1) out += '^' + std::to_string(e);
  };
  add(0, m.first);
  add(1, m.second);
  return out;
}

}  // namespace detail

/// Parse an expression in l1, l2 (lambda basis; H, A, K accepted as shorthands) or in
/// H, A (HA basis; K = (H^2 - A)/2 accepted). Precedence, highest first: '^'
/// (right-associative, constant exponent 0..64), unary minus, '*' '/', '+' '-'.
inline RationalFn parse(const ExprSource& src) { return detail::ExprParser(src.text, src.basis).parse(); }
inline RationalFn parse(std::string_view text, Basis basis = Basis::Lambda) {
  return detail::ExprParser(text, basis).parse();
}

/// Expanded polynomial text, grlex-descending terms.
inline std::string print(const BivarPoly& p, bool spaced = true) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    std::string mono = detail::monomial_text(p.basis(), m);
    std::string body;
    if (mono.empty()) {
      body = a.get_str();
    } else if (a == 1) {
      body = mono;
    } else {
      body = a.get_str() + "*" + mono;
    }
    if (first) {
      out += neg ? "-" + body : body;
    } else if (spaced) {
      out += (neg ? " - " : " + ") + body;
    } else {
      out += (neg ? "-" : "+") + body;
    }
    first = false;
  }
  return out;
}

namespace detail {

inline bool needs_parens_as_denominator(const BivarPoly& d) {
  if (d.size() != 1) return true;
  const auto& [m, c] = d.leading();
  if (c != 1) return m.degree() != 0;
  return m.first != 0 && m.second != 0;
}

// Scale num and den so both have coprime integer coefficients jointly.
inline std::pair<BivarPoly, BivarPoly> integer_pair(const RationalFn& f) {
  Integer l = f.num().denominator_lcm();
  BivarPoly n = f.num().scaled(Rational(l));
  BivarPoly d = f.den().scaled(Rational(l));
  Integer g = 0;
  for (const auto& [m, c] : n.terms()) g = gcd(g, Integer(c.get_num()));
  for (const auto& [m, c] : d.terms()) g = gcd(g, Integer(c.get_num()));
  if (g > 1) {
    n = n.scaled(Rational(1) / Rational(g));
    d = d.scaled(Rational(1) / Rational(g));
  }
  return {n, d};
}

}  // namespace detail

/// Canonical expanded text of a rational function: "N", "N/d" or "N/(D)" with integer
/// coefficients and grlex-ordered terms. parse(print(f)) == f.
inline std::string print(const RationalFn& f, bool spaced = true) {
  if (f.is_zero()) return "0";
  auto [n, d] = detail::integer_pair(f);
  std::string ns = print(n, spaced);
  if (d.is_constant() && d.constant_term() == 1) return ns;
  if (n.size() > 1) ns = "(" + ns + ")";
  std::string ds = print(d, spaced);
  if (detail::needs_parens_as_denominator(d)) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

namespace detail {

inline std::vector<Integer> small_divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> out;
  if (n == 0 || n > Integer("1000000000000")) return {Integer(1)};
  unsigned long v = n.get_ui();
  for (unsigned long k = 1; k * k <= v; ++k) {
    if (v % k) continue;
    out.emplace_back(k);
    if (k * k != v) out.emplace_back(v / k);
  }
  return out;
}

struct Factor {
  BivarPoly poly;
  unsigned multiplicity;
  int kind;  // 0 nonlinear, 1 linear, 2 variable power
  Rational root;
};

// Factor a homogeneous lambda-basis polynomial into scalar, rational linear forms,
// squarefree nonlinear parts and powers of l1, l2.
inline std::pair<Rational, std::vector<Factor>> factor_homogeneous(const BivarPoly& p) {
  std::vector<Factor> out;
  UnivarPoly u = p.dehomogenize();
  unsigned pow_l2 = static_cast<unsigned>(p.degree() - u.degree());
  unsigned pow_l1 = 0;
  while (u.coeff(0) == 0) {
    u = exact_div(u, UnivarPoly::monomial(1));
    ++pow_l1;
  }
  auto sq = squarefree_decomposition(u);
  Rational scalar = sq.content;
  for (auto& [f, mult] : sq.factors) {
    UnivarPoly rest = f;  // monic
    // Rational roots via the rational root theorem on the integer primitive part.
    UnivarPoly ints = f.primitive_positive();
    auto ps = small_divisors(ints.coeff(0).get_num());
    auto qs = small_divisors(ints.leading().get_num());
    std::vector<Rational> roots;
    for (const auto& pp : ps)
      for (const auto& qq : qs)
        for (int s : {1, -1}) {
          Rational r(Integer(s * pp), qq);
          r.canonicalize();
          if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
          if (ints(r) == 0) roots.push_back(r);
        }
    std::sort(roots.begin(), roots.end());
    for (const auto& r : roots) {
      rest = exact_div(rest, UnivarPoly::linear_root(r));
      UnivarPoly lin(std::vector<Rational>{Rational(-r.get_num()), Rational(r.get_den())});
      scalar /= curvflow::pow(Rational(r.get_den()), mult);
      out.push_back({BivarPoly::homogenize(lin, 1), mult, 1, r});
    }
    if (rest.degree() > 0) {
      UnivarPoly prim = rest.primitive_positive();
      scalar /= curvflow::pow(prim.leading(), mult);
      out.push_back({BivarPoly::homogenize(prim, static_cast<unsigned>(prim.degree())), mult, 0, Rational(0)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.multiplicity < b.multiplicity;
  });
  if (pow_l1) out.push_back({BivarPoly::variable(0), pow_l1, 2, Rational(0)});
  if (pow_l2) out.push_back({BivarPoly::variable(1), pow_l2, 2, Rational(0)});
  return {scalar, out};
}

inline std::string factor_product(const Integer& scalar, const std::vector<Factor>& fs, std::size_t* items) {
  std::vector<std::string> parts;
  if (scalar != 1 || fs.empty()) parts.push_back(scalar.get_str());
  for (const auto& f : fs) {
    std::string s = print(f.poly, false);
    if (f.kind != 2) s = "(" + s + ")";
    if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
    parts.push_back(s);
  }
  *items = parts.size();
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? "*" : "") + parts[k];
  return out;
}

}  // namespace detail

/// Factored layout for homogeneous lambda-basis values, e.g.
/// "-(l1+l2)*(l1-l2)^2/(2*l1^3*l2^3)": sign, numerator scalar, squarefree nonlinear
/// factors, rational linear factors (by multiplicity), then powers of l1 and l2.
/// Other values fall back to print(). The result parses back to the same value.
inline std::string print_factored(const RationalFn& f) {
  if (f.is_zero() || f.basis() != Basis::Lambda || !f.num().is_homogeneous() || !f.den().is_homogeneous())
    return print(f, false);
  auto [sn, fn] = detail::factor_homogeneous(f.num());
  auto [sd, fd] = detail::factor_homogeneous(f.den());
  Rational s = sn / sd;
  std::string out = s < 0 ? "-" : "";
  if (s < 0) s = -s;
  std::size_t n_items = 0, d_items = 0;
  std::string num = detail::factor_product(s.get_num(), fn, &n_items);
  out += num;
  if (fd.empty() && s.get_den() == 1) {
    if (out.front() != '-' && fn.size() == 1 && n_items == 1 && fn[0].multiplicity == 1) return print(fn[0].poly, false);
    return out;
  }
  std::string den = detail::factor_product(s.get_den(), fd, &d_items);
  if (d_items > 1) den = "(" + den + ")";
  return out + "/" + den;
}

/// Read a velocity/candidate file: one expression per line, '#' starts a comment,
/// blank lines are skipped.
inline std::vector<std::string> read_expression_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

inline std::vector<std::string> read_expression_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expression file '" + path + "'");
  return read_expression_lines(in);
}

}  // namespace curvflow
