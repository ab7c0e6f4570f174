#include "twospaces/duality.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twospaces {

namespace {

Rational frac(const Rational& q) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational r = q - Rational(fl);
  r.canonicalize();
  return r;
}

Integer lcm_of(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Rational dot(const Vector& l, const RationalVector& q) {
  Rational s = 0;
  for (std::size_t i = 0; i < l.size(); ++i) s += Rational(l[i]) * q[i];
  s.canonicalize();
  return s;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace

TorusSubgroup::TorusSubgroup(std::size_t ambient, std::vector<RationalVector> torsion, const Matrix& directions)
    : ambient_(ambient) {
  if (directions.cols() != ambient && directions.rows() != 0) throw Error("direction length differs from ambient");
  for (const auto& q : torsion)
    if (q.size() != ambient) throw Error("torsion generator length differs from ambient");

  // Saturate: the subtorus only sees the rational span of the directions.
  Matrix dirs = directions.rows() == 0 ? Matrix(0, ambient) : directions;
  directions_ = integer_kernel(integer_kernel(dirs));
  const Lattice dir_lattice(directions_);
  const auto& pivots = dir_lattice.pivots();

  // Project along the direction span onto vectors vanishing on its pivots.
  auto project = [&](RationalVector x) {
    for (std::size_t k = 0; k < directions_.rows(); ++k) {
      const std::size_t p = pivots[k];
      if (x[p] == 0) continue;
      Rational c = x[p] / Rational(directions_(k, p));
      for (std::size_t j = 0; j < ambient; ++j) x[j] -= c * Rational(directions_(k, j));
    }
    for (auto& v : x) v.canonicalize();
    return x;
  };

  std::vector<RationalVector> points, lambda;
  for (auto& q : torsion) points.push_back(project(q));
  for (std::size_t j = 0; j < ambient; ++j) {
    RationalVector e(ambient, Rational(0));
    e[j] = 1;
    lambda.push_back(project(e));
  }

  Integer denom = 1;
  for (const auto* set : {&points, &lambda})
    for (const auto& x : *set)
      for (const auto& v : x) denom = lcm_of(denom, v.get_den());

  auto scaled = [&](const std::vector<RationalVector>& xs) {
    Matrix m(xs.size(), ambient);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ambient; ++j) {
        Rational v = xs[i][j] * Rational(denom);
        v.canonicalize();
        m(i, j) = v.get_num();
      }
    return m;
  };
  std::vector<RationalVector> all = points;
  all.insert(all.end(), lambda.begin(), lambda.end());
  const Lattice group(scaled(all));
  const Lattice base(scaled(lambda));

  std::set<RationalVector> out;
  for (std::size_t i = 0; i < group.rank(); ++i) {
    Vector row = group.basis().row(i);
    if (base.contains(row)) continue;
    RationalVector t(ambient);
    for (std::size_t j = 0; j < ambient; ++j) t[j] = frac(Rational(row[j], denom));
    out.insert(std::move(t));
  }
  torsion_.assign(out.begin(), out.end());
}

TorusSubgroup TorusSubgroup::trivial(std::size_t ambient) { return TorusSubgroup(ambient, {}, Matrix(0, ambient)); }

TorusSubgroup TorusSubgroup::full(std::size_t ambient) {
  return TorusSubgroup(ambient, {}, Matrix::identity(ambient));
}

TorusSubgroup TorusSubgroup::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<std::size_t> ambient;
  std::vector<RationalVector> torsion;
  std::vector<Vector> dirs;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (head == "ambient") {
      long long n = -1;
      if (!(ls >> n) || n < 0) throw ParseError(where + "expected 'ambient <n>'");
      ambient = static_cast<std::size_t>(n);
      continue;
    }
    if (!ambient) throw ParseError(where + "'ambient' must come first");
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (toks.size() != *ambient) throw ParseError(where + "expected " + std::to_string(*ambient) + " entries");
    try {
      if (head == "t") {
        RationalVector q;
        for (auto& tok : toks) {
          Rational r(tok);
          if (r.get_den() == 0) throw ParseError(where + "zero denominator");
          r.canonicalize();
          q.push_back(r);
        }
        torsion.push_back(std::move(q));
      } else if (head == "d") {
        Vector v;
        for (auto& tok : toks) v.emplace_back(tok);
        dirs.push_back(std::move(v));
      } else {
        throw ParseError(where + "expected 't' or 'd'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError(where + "bad number");
    }
  }
  if (!ambient) throw ParseError("missing 'ambient' line");
  return TorusSubgroup(*ambient, std::move(torsion), Matrix::from_rows(dirs, *ambient));
}

std::string TorusSubgroup::str() const {
  std::ostringstream os;
  os << "ambient " << ambient_ << '\n';
  for (const auto& q : torsion_) {
    os << 't';
    for (const auto& v : q) os << ' ' << v;
    os << '\n';
  }
  for (std::size_t i = 0; i < directions_.rows(); ++i) {
    os << 'd';
    for (std::size_t j = 0; j < ambient_; ++j) os << ' ' << directions_(i, j);
    os << '\n';
  }
  return os.str();
}

Lattice annihilator(const TorusSubgroup& k) {
  const std::size_t n = k.ambient();
  const std::size_t m = k.torsion().size();
  const Matrix& dirs = k.directions();
  // Unknowns (l, s): dirs·l = 0 and (D_k q_k)·l − D_k s_k = 0.
  Matrix a(dirs.rows() + m, n + m);
  for (std::size_t i = 0; i < dirs.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dirs(i, j);
  for (std::size_t t = 0; t < m; ++t) {
    const auto& q = k.torsion()[t];
    Integer d = 1;
    for (const auto& v : q) d = lcm_of(d, v.get_den());
    const std::size_t row = dirs.rows() + t;
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = q[j] * Rational(d);
      v.canonicalize();
      a(row, j) = v.get_num();
    }
    a(row, n + t) = -d;
  }
  Matrix kernel = integer_kernel(a);
  Matrix proj(kernel.rows(), n);
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) proj(i, j) = kernel(i, j);
  return Lattice(proj);
}

TorusSubgroup annihilated_subgroup(const Lattice& l) {
  const std::size_t n = l.ambient();
  SnfResult s = snf_with_transform(l.basis());
  const std::size_t r = s.diagonal.size();
  std::vector<RationalVector> torsion;
  for (std::size_t i = 0; i < r; ++i) {
    RationalVector q(n);
    for (std::size_t j = 0; j < n; ++j) {
      q[j] = Rational(s.v(j, i), s.diagonal[i]);
      q[j].canonicalize();
    }
    torsion.push_back(std::move(q));
  }
  Matrix dirs(n - r, n);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dirs(i - r, j) = s.v(j, i);
  return TorusSubgroup(n, std::move(torsion), dirs);
}

FGAbelianInvariants dual_invariants(const TorusSubgroup& k) { return quotient_invariants(annihilator(k)); }

bool is_connected(const TorusSubgroup& k) { return k.torsion().empty(); }

bool is_saturated(const Lattice& l) { return quotient_invariants(l).torsion.empty(); }

bool contains_point(const TorusSubgroup& k, const RationalVector& q) {
  const Lattice ann = annihilator(k);
  for (std::size_t i = 0; i < ann.rank(); ++i)
    if (!is_integer(dot(ann.basis().row(i), q))) return false;
  return true;
}

bool contains_direction(const TorusSubgroup& k, const Vector& v) {
  const Lattice ann = annihilator(k);
  for (std::size_t i = 0; i < ann.rank(); ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += ann.basis()(i, j) * v[j];
    if (s != 0) return false;
  }
  return true;
}

bool contains(const TorusSubgroup& k, const TorusSubgroup& sub) {
  if (k.ambient() != sub.ambient()) throw Error("ambient ranks differ");
  for (const auto& q : sub.torsion())
    if (!contains_point(k, q)) return false;
  for (std::size_t i = 0; i < sub.directions().rows(); ++i)
    if (!contains_direction(k, sub.directions().row(i))) return false;
  return true;
}

bool contains_by_annihilator(const TorusSubgroup& k, const TorusSubgroup& sub) {
  if (k.ambient() != sub.ambient()) throw Error("ambient ranks differ");
  return annihilator(sub).contains(annihilator(k));
}

bool dual_of_product_check(const Lattice& l1, const Lattice& l2) {
  const Lattice joint(block_diagonal(l1.basis(), l2.basis()));
  return quotient_invariants(joint) == merge_invariants(quotient_invariants(l1), quotient_invariants(l2));
}

namespace {

TorusSubgroup cyclic_point(const Integer& order) {
  return TorusSubgroup(1, {RationalVector{Rational(1, order)}}, Matrix(0, 1));
}

std::string torsion_str(const FGAbelianInvariants& inv) {
  std::string s = "(";
  for (std::size_t i = 0; i < inv.torsion.size(); ++i) s += (i ? "," : "") + inv.torsion[i].get_str();
  return s + ")";
}

}  // namespace

TowerReport prufer_tower_report(const Integer& p, std::uint64_t k) {
  TowerReport report;
  if (k == 0) throw Error("prufer tower needs k >= 1");
  if (mpz_probab_prime_p(p.get_mpz_t(), 25) == 0) throw Error(p.get_str() + " is not prime");
  Integer power = 1;
  std::optional<TorusSubgroup> prev;
  std::optional<Lattice> prev_ann;
  for (std::uint64_t j = 1; j <= k; ++j) {
    power *= p;
    TorusSubgroup kj = cyclic_point(power);
    Lattice ann = annihilator(kj);
    FGAbelianInvariants inv = dual_invariants(kj);
    const bool ann_ok = ann == Lattice(Matrix::from_rows({{power}}, 1));
    const bool inv_ok = inv.rank == 0 && inv.torsion == std::vector<Integer>{power};
    bool ok = ann_ok && inv_ok;
    std::string line = "level " + std::to_string(j) + ": ann " + ann.str() + " dual " + inv.str();
    if (prev) {
      const bool nested = contains(kj, *prev) && contains_by_annihilator(kj, *prev);
      const bool reversed = prev_ann->contains(ann) && !ann.contains(*prev_ann);
      line += nested && reversed ? " inclusion reversed" : " inclusion NOT reversed";
      ok = ok && nested && reversed;
    }
    line += ok ? " ok" : " FAIL";
    report.lines.push_back(line);
    report.ok = report.ok && ok;
    prev = kj;
    prev_ann = ann;
  }
  return report;
}

bool prufer_tower_check(const Integer& p, std::uint64_t k) { return prufer_tower_report(p, k).ok; }

TowerReport solenoid_tower_report(std::uint64_t levels) {
  if (levels < 2) throw Error("solenoid tower needs levels >= 2");
  TowerReport report;
  Integer fact = 1;
  std::optional<TorusSubgroup> prev;
  Integer prev_fact = 1;
  for (std::uint64_t m = 1; m <= levels; ++m) {
    fact *= static_cast<unsigned long>(m);
    TorusSubgroup km = cyclic_point(fact);
    FGAbelianInvariants inv = dual_invariants(km);
    FGAbelianInvariants expected;
    if (fact > 1) expected.torsion = {fact};
    bool ok = inv == expected && annihilator(km) == Lattice(Matrix::from_rows({{fact}}, 1));
    std::string line = "stage " + std::to_string(m) + ": dual Z/" + fact.get_str() + " " + torsion_str(inv);
    if (prev) {
      // Restriction of characters l ↦ l·(1/m!) along K_{m-1} ⊆ K_m is l mod (m-1)!.
      const unsigned long big = fact.get_ui(), small = prev_fact.get_ui();
      std::set<unsigned long> image;
      std::uint64_t kernel = 0;
      bool hom = true, restricts = true;
      for (unsigned long l = 0; l < big; ++l) {
        const unsigned long r = l % small;
        image.insert(r);
        if (r == 0) ++kernel;
        if ((l + 1) % big % small != (r + 1) % small) hom = false;
        Rational expected_value(r, small);
        expected_value.canonicalize();
        if (frac(Rational(l, small)) != expected_value) restricts = false;
      }
      const bool onto = image.size() == small;
      const bool nested = contains(km, *prev);
      line += " map Z/" + fact.get_str() + "->Z/" + prev_fact.get_str() + " kernel " + std::to_string(kernel) +
              (onto ? " surjective" : " NOT surjective");
      ok = ok && hom && restricts && onto && nested && kernel == big / small;
    }
    line += ok ? " ok" : " FAIL";
    report.lines.push_back(line);
    report.ok = report.ok && ok;
    prev = km;
    prev_fact = fact;
    if (!fact.fits_ulong_p() || fact > 1'000'000) {
      if (m < levels) {
        report.ok = false;
        report.lines.push_back("stage " + std::to_string(m + 1) + ": exceeds the explicit arithmetic bound");
      }
      break;
    }
  }
  return report;
}

bool solenoid_tower_check(std::uint64_t levels) { return solenoid_tower_report(levels).ok; }

}  // namespace twospaces
