#include "slopekit/matrix.hpp"

namespace slopekit {

Integer bareiss_determinant(ZMatrix m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  const size_t n = m.rows();
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Rational determinant(const QMatrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  const size_t n = m.rows();
  ZMatrix z(n, n);
  Integer scale = 1;
  for (size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (size_t j = 0; j < n; ++j) l = lcm(l, m(i, j).get_den());
    for (size_t j = 0; j < n; ++j) z(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
    scale *= l;
  }
  Rational d(bareiss_determinant(std::move(z)), scale);
  d.canonicalize();
  return d;
}

QMatrix to_rational(const ZMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

ZVector clear_denominators(const QVector& v) {
  Integer l = 1, g = 0;
  for (const auto& x : v) l = lcm(l, x.get_den());
  ZVector z;
  z.reserve(v.size());
  for (const auto& x : v) {
    z.push_back(x.get_num() * (l / x.get_den()));
    g = gcd(g, z.back());
  }
  if (g > 1)
    for (auto& x : z) x /= g;
  return z;
}

QMatrix rref(QMatrix m) {
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    Rational inv = 1 / m(r, c);
    for (size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return m.block(0, 0, r, m.cols());
}

size_t rank(QMatrix m) { return rref(std::move(m)).rows(); }

QMatrix nullspace(const QMatrix& m) {
  QMatrix e = rref(m);
  const size_t n = m.cols();
  std::vector<long> pivot_of_col(n, -1);
  for (size_t i = 0; i < e.rows(); ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (sgn(e(i, j)) != 0) {
        pivot_of_col[j] = static_cast<long>(i);
        break;
      }
    }
  }
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < n; ++j)
    if (pivot_of_col[j] < 0) free_cols.push_back(j);
  QMatrix k(free_cols.size(), n, Rational(0));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    size_t fc = free_cols[f];
    k(f, fc) = 1;
    for (size_t j = 0; j < n; ++j) {
      if (pivot_of_col[j] >= 0) k(f, j) = -e(static_cast<size_t>(pivot_of_col[j]), fc);
    }
  }
  return k;
}

ColumnEchelon column_echelon(const ZMatrix& b) {
  const size_t r = b.cols();
  ColumnEchelon out;
  out.reduced = b;
  out.transform = ZMatrix::identity(r);
  out.inverse = ZMatrix::identity(r);
  ZMatrix& m = out.reduced;
  ZMatrix& c = out.transform;
  ZMatrix& ci = out.inverse;
  size_t pc = 0;
  Integer g, s, t, xg, yg, tmp;
  for (size_t i = 0; i < m.rows() && pc < r; ++i) {
    for (size_t j = pc + 1; j < r; ++j) {
      if (m(i, j) == 0) continue;
      if (m(i, pc) == 0) {
        m.swap_cols(pc, j);
        c.swap_cols(pc, j);
        ci.swap_rows(pc, j);
        continue;
      }
      const Integer x = m(i, pc), y = m(i, j);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      xg = x / g;
      yg = y / g;
      // columns: [a b] <- [a b] * [[s, -y/g], [t, x/g]]
      auto mix_cols = [&](ZMatrix& z) {
        for (size_t row = 0; row < z.rows(); ++row) {
          Integer a = z(row, pc), bb = z(row, j);
          z(row, pc) = s * a + t * bb;
          z(row, j) = xg * bb - yg * a;
        }
      };
      mix_cols(m);
      mix_cols(c);
      // rows of the inverse: [a; b] <- [[x/g, y/g], [-t, s]] * [a; b]
      for (size_t col = 0; col < r; ++col) {
        Integer a = ci(pc, col), bb = ci(j, col);
        ci(pc, col) = xg * a + yg * bb;
        ci(j, col) = s * bb - t * a;
      }
    }
    if (m(i, pc) != 0) {
      if (m(i, pc) < 0) {
        for (size_t row = 0; row < m.rows(); ++row) m(row, pc) = -m(row, pc);
        for (size_t row = 0; row < r; ++row) c(row, pc) = -c(row, pc);
        for (size_t col = 0; col < r; ++col) ci(pc, col) = -ci(pc, col);
      }
      ++pc;
    }
  }
  out.rank = pc;
  return out;
}

ZMatrix hermite_normal_form(ZMatrix m) {
  size_t r = 0;
  Integer g, s, t, xg, yg;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    for (size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      if (m(r, c) == 0) {
        m.swap_rows(r, i);
        continue;
      }
      const Integer x = m(r, c), y = m(i, c);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      xg = x / g;
      yg = y / g;
      for (size_t j = 0; j < m.cols(); ++j) {
        Integer a = m(r, j), b = m(i, j);
        m(r, j) = s * a + t * b;
        m(i, j) = xg * b - yg * a;
      }
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0)
      for (size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
    for (size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(r, c).get_mpz_t());
      if (q == 0) continue;
      for (size_t j = 0; j < m.cols(); ++j) m(i, j) -= q * m(r, j);
    }
    ++r;
  }
  return m.block(0, 0, r, m.cols());
}

ZMatrix integer_kernel(const ZMatrix& m) {
  ColumnEchelon e = column_echelon(m);
  const size_t r = m.cols();
  ZMatrix k(r - e.rank, r);
  for (size_t f = e.rank; f < r; ++f)
    for (size_t i = 0; i < r; ++i) k(f - e.rank, i) = e.transform(i, f);
  return k;
}

}  // namespace slopekit
