#include "slopekit/exactval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace slopekit {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto valid = [](const std::string& part) {
    size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (start >= part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(start), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
  };
  size_t slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  Rational q(n, d);
  q.canonicalize();
  return q;
}

namespace {

Integer pollard_brent(const Integer& n) {
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, ys, q = 1, g = 1, t;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto step = [&](Integer& v) {
      v = v * v + c;
      v %= n;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          t = abs(x - y);
          q = (q * t) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        t = abs(x - ys);
        g = gcd(t, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(const Integer& n, std::map<Integer, unsigned long>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    ++out[n];
    return;
  }
  Integer root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    root = sqrt(n);
    std::map<Integer, unsigned long> half;
    factor_large(root, half);
    for (auto& [p, e] : half) out[p] += 2 * e;
    return;
  }
  Integer d = pollard_brent(n);
  factor_large(d, out);
  factor_large(Integer(n / d), out);
}

}  // namespace

std::map<Integer, unsigned long> factor_integer(const Integer& n_in) {
  if (n_in == 0) throw std::domain_error("cannot factor zero");
  Integer n = abs(n_in);
  std::map<Integer, unsigned long> out;
  auto strip = [&](unsigned long p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      unsigned long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out[Integer(p)] = e;
    }
  };
  strip(2);
  strip(3);
  for (unsigned long p = 5; p <= 1'000'000; p += 6) {
    if (n == 1 || Integer(p) * p > n) break;
    strip(p);
    strip(p + 2);
  }
  if (n != 1) factor_large(n, out);
  return out;
}

LogRational::LogRational(const Rational& constant) : constant_(constant) { constant_.canonicalize(); }

void LogRational::add_log_integer(const Integer& n, const Rational& coeff) {
  if (sgn(coeff) == 0 || n == 1) return;
  for (const auto& [p, e] : factor_integer(n)) {
    Rational& c = terms_[p];
    c += coeff * e;
    if (sgn(c) == 0) terms_.erase(p);
  }
}

LogRational LogRational::log_of(const Rational& q) {
  if (sgn(q) <= 0) throw std::domain_error("log of non-positive rational " + slopekit::to_string(q));
  LogRational r;
  r.add_log_integer(q.get_num(), Rational(1));
  r.add_log_integer(q.get_den(), Rational(-1));
  return r;
}

LogRational LogRational::operator-() const {
  LogRational r(*this);
  r.constant_ = -r.constant_;
  for (auto& [p, c] : r.terms_) c = -c;
  return r;
}

LogRational& LogRational::operator+=(const LogRational& other) {
  constant_ += other.constant_;
  for (const auto& [p, c] : other.terms_) {
    Rational& mine = terms_[p];
    mine += c;
    if (sgn(mine) == 0) terms_.erase(p);
  }
  return *this;
}

LogRational& LogRational::operator-=(const LogRational& other) { return *this += -other; }

LogRational& LogRational::operator*=(const Rational& factor_in) {
  Rational factor = factor_in;
  factor.canonicalize();
  if (sgn(factor) == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= factor;
  for (auto& [p, c] : terms_) c *= factor;
  return *this;
}

LogRational& LogRational::operator/=(const Rational& divisor) {
  if (sgn(divisor) == 0) throw std::domain_error("division by zero");
  return *this *= Rational(1 / divisor);
}

bool operator==(const LogRational& a, const LogRational& b) {
  return a.constant_ == b.constant_ && a.terms_ == b.terms_;
}

Interval LogRational::enclose(int bits) const {
  if (bits < 16) throw std::invalid_argument("precision below 16 bits");
  if (is_zero()) return Interval(Rational(0), bits);
  mpfr_prec_t wp = bits + 16 + 4 * static_cast<mpfr_prec_t>(terms_.size());
  for (;;) {
    Interval inner(constant_, wp);
    for (const auto& [p, c] : terms_) inner = inner + Interval::log_of(p, wp).scaled(c);
    Interval sum = inner.rounded(bits);
    // width <= 2^(1-bits) * max(1, |value|), tested against the lower magnitude bound
    mpfr_t w, lim, mag;
    mpfr_inits2(wp, w, lim, mag, static_cast<mpfr_ptr>(nullptr));
    mpfr_sub(w, sum.hi(), sum.lo(), MPFR_RNDU);
    if (sum.contains_zero()) {
      mpfr_set_ui(mag, 0, MPFR_RNDD);
    } else if (sum.positive()) {
      mpfr_set(mag, sum.lo(), MPFR_RNDD);
    } else {
      mpfr_neg(mag, sum.hi(), MPFR_RNDD);
    }
    if (mpfr_cmp_ui(mag, 1) < 0) mpfr_set_ui(mag, 1, MPFR_RNDD);
    mpfr_mul_2si(lim, mag, 1 - bits, MPFR_RNDD);
    bool ok = mpfr_cmp(w, lim) <= 0;
    mpfr_clears(w, lim, mag, static_cast<mpfr_ptr>(nullptr));
    if (ok) return sum;
    wp *= 2;
  }
}

double LogRational::approx() const { return enclose(64).mid_double(); }

std::strong_ordering compare(const LogRational& a, const LogRational& b) {
  LogRational d = a - b;
  if (d.is_zero()) return std::strong_ordering::equal;
  if (d.is_rational()) return sgn(d.constant()) > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
  for (int bits = 64; bits <= (1 << 22); bits *= 2) {
    Interval iv = d.enclose(bits);
    if (iv.positive()) return std::strong_ordering::greater;
    if (iv.negative()) return std::strong_ordering::less;
  }
  throw std::runtime_error("comparison did not resolve: " + d.to_string());
}

std::strong_ordering operator<=>(const LogRational& a, const LogRational& b) { return compare(a, b); }

LogRational max(const LogRational& a, const LogRational& b) { return a < b ? b : a; }
LogRational min(const LogRational& a, const LogRational& b) { return b < a ? b : a; }

namespace {

std::string render_log_term(const Rational& coeff, const std::string& arg) {
  if (coeff == 1) return "log(" + arg + ")";
  if (coeff == -1) return "-log(" + arg + ")";
  return to_string(coeff) + "*log(" + arg + ")";
}

}  // namespace

std::string LogRational::to_string() const {
  bool has_constant = sgn(constant_) != 0;
  if (terms_.empty()) return has_constant ? slopekit::to_string(constant_) : "0";

  Rational coeff;
  std::string arg;
  if (terms_.size() == 1) {
    coeff = terms_.begin()->second;
    arg = terms_.begin()->first.get_str();
  } else {
    Integer g_num = 0, l_den = 1;
    for (const auto& [p, c] : terms_) {
      g_num = gcd(g_num, Integer(abs(c.get_num())));
      l_den = lcm(l_den, c.get_den());
    }
    coeff = Rational(g_num, l_den);
    coeff.canonicalize();
    Integer num = 1, den = 1, pw;
    for (const auto& [p, c] : terms_) {
      Rational e = c / coeff;
      Integer ei = e.get_num();
      mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), Integer(abs(ei)).get_ui());
      if (sgn(ei) > 0) {
        num *= pw;
      } else {
        den *= pw;
      }
    }
    arg = den == 1 ? num.get_str() : num.get_str() + "/" + den.get_str();
  }
  if (!has_constant) return render_log_term(coeff, arg);
  if (sgn(coeff) < 0) return slopekit::to_string(constant_) + " - " + render_log_term(Rational(-coeff), arg);
  return slopekit::to_string(constant_) + " + " + render_log_term(coeff, arg);
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  LogRational parse() {
    LogRational total;
    skip();
    int sign = 1;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1 : 1;
    total += term() * Rational(sign);
    for (;;) {
      skip();
      if (pos_ == s_.size()) break;
      char op = take();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      LogRational t = term();
      if (op == '+') {
        total += t;
      } else {
        total -= t;
      }
    }
    return total;
  }

 private:
  LogRational term() {
    skip();
    if (s_.substr(pos_, 3) == "log") return log_call();
    Rational q = rational();
    skip();
    if (peek() == '*') {
      take();
      skip();
      return log_call() * q;
    }
    return LogRational(q);
  }

  LogRational log_call() {
    if (s_.substr(pos_, 3) != "log") fail("expected log(");
    pos_ += 3;
    skip();
    if (take() != '(') fail("expected '('");
    Rational arg = rational();
    skip();
    if (take() != ')') fail("expected ')'");
    return LogRational::log_of(arg);
  }

  Rational rational() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    if (start == pos_) fail("expected rational");
    return parse_rational(s_.substr(start, pos_ - start));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char take() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string(what) + " at offset " + std::to_string(pos_) + " in '" +
                                std::string(s_) + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

LogRational LogRational::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace slopekit
