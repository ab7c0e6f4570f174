#include "twospaces/transfer.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace twospaces {

Code sigma(Index k) { return unpair(k).first; }

MarkedGroup phi(const GroupOracle& g) { return kernel_of_marking(g, Assignment::identity()); }

MarkedGroup sigma_kernel(const GroupOracle& g) { return kernel_of_marking(g, Assignment::pair_row()); }

bool unique_generator_check(const MarkedGroup& n, Index window) {
  for (Index j = 1; j < window; ++j)
    for (Index i = 0; i < j; ++i)
      if (same_coset(n, Word::generator(i), Word::generator(j))) return false;
  return true;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::True:
      return "true";
    case Tri::False:
      return "false";
    case Tri::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

// Size of the subgroup generated by `gens`, if it closes below `limit`.
std::optional<std::uint64_t> closure_size(const GroupOracle& g, const std::vector<Code>& gens,
                                          std::uint64_t limit, BudgetMeter& meter) {
  std::vector<Code> steps;
  for (Code x : gens) {
    steps.push_back(x);
    steps.push_back(g.inverse(x));
  }
  std::set<Code> seen{g.identity()};
  std::deque<Code> queue{g.identity()};
  while (!queue.empty()) {
    Code x = queue.front();
    queue.pop_front();
    for (Code s : steps) {
      meter.charge("subgroup closure");
      Code y = g.mul(x, s);
      if (seen.insert(y).second) {
        if (seen.size() >= limit) return std::nullopt;
        queue.push_back(y);
      }
    }
  }
  return seen.size();
}

}  // namespace

Tri dm_check(const MarkedGroup& n, std::uint64_t m, std::uint64_t budget) {
  if (m == 0) return Tri::True;
  // Disproofs read off the marking itself.
  if (auto bound = n.assignment().fiber_bound(); bound && *bound < m) return Tri::False;

  BudgetMeter meter(budget);
  try {
    if (auto gens = n.assignment().finite_image()) {
      if (auto size = closure_size(n.oracle(), *gens, m, meter); size && *size < m) return Tri::False;
    }

    // Any pairwise inequivalent words witness the order; single generators
    // reach fresh cosets much sooner than the enumeration does.
    std::set<Code> cosets;
    for (Index k = 0; cosets.size() < m; ++k) {
      meter.charge("coset count");
      cosets.insert(n.image(enumerate(Integer(static_cast<unsigned long>(k)))));
      if (cosets.size() < m) {
        meter.charge("coset count");
        cosets.insert(n.generator_image(k));
      }
    }

    for (std::uint64_t i = 0; i < m; ++i) {
      const Code key = n.image(enumerate(Integer(static_cast<unsigned long>(i))));
      std::uint64_t hits = 0;
      if (auto candidates = n.assignment().fiber_candidates(key, m)) {
        for (Index j : *candidates) {
          meter.charge("generator probe");
          if (n.generator_image(j) == key) ++hits;
        }
        if (hits >= m) continue;
        hits = 0;
      }
      for (Index j = 0; hits < m; ++j) {
        meter.charge("generator scan");
        if (n.generator_image(j) == key) ++hits;
      }
    }
    return Tri::True;
  } catch (const BudgetExhausted&) {
    return Tri::Unknown;
  } catch (const MissingAssignment&) {
    return Tri::Unknown;
  }
}

// ---------------------------------------------------------------------------
// Transversal

Transversal::Transversal(MarkedGroup source) : source_(std::move(source)) {}

void Transversal::scan_one(BudgetMeter& meter) {
  meter.charge("transversal scan");
  const Index i = next_++;
  const Code key = source_.generator_image(i);
  if (position_.emplace(key, indices_.size()).second) {
    indices_.push_back(i);
    images_.push_back(key);
  }
}

Index Transversal::index(std::size_t k, BudgetMeter& meter) {
  std::lock_guard lock(mutex_);
  while (indices_.size() <= k) scan_one(meter);
  return indices_[k];
}

Code Transversal::image(std::size_t k, BudgetMeter& meter) {
  std::lock_guard lock(mutex_);
  while (images_.size() <= k) scan_one(meter);
  return images_[k];
}

// For a table filling the indices below the offset, followed by a pair-row or
// enumeration tail, value c first appears in the tail after every smaller
// value, so its slot is c plus the table values that are at least c.
std::optional<std::size_t> Transversal::closed_form_position(Code image) const {
  const Assignment& a = source_.assignment();
  if (a.has_post()) return std::nullopt;
  Index offset = 0;
  if (const auto* p = std::get_if<Assignment::PairRow>(&a.tail()))
    offset = p->offset;
  else if (const auto* e = std::get_if<Assignment::Enumeration>(&a.tail()))
    offset = e->offset;
  else
    return std::nullopt;
  if (a.table().size() != offset) return std::nullopt;
  std::set<Code> above;
  for (const auto& [i, c] : a.table()) {
    if (i >= offset || c == image) return std::nullopt;
    if (c > image) above.insert(c);
  }
  return image + above.size();
}

std::size_t Transversal::position_of_image(Code image, BudgetMeter& meter) {
  std::lock_guard lock(mutex_);
  if (auto it = position_.find(image); it != position_.end()) return it->second;
  if (auto p = closed_form_position(image)) {
    meter.charge("closed-form slot");
    return *p;
  }
  while (true) {
    if (auto it = position_.find(image); it != position_.end()) return it->second;
    scan_one(meter);
  }
}

std::size_t Transversal::position_of_generator(Index i, BudgetMeter& meter) {
  const Code key = source_.generator_image(i);
  std::lock_guard lock(mutex_);
  while (next_ <= i) scan_one(meter);
  return position_.at(key);
}

std::vector<Index> Transversal::known_indices() const {
  std::lock_guard lock(mutex_);
  return indices_;
}

Index transversal_index(const MarkedGroup& n, std::size_t k, std::uint64_t budget) {
  Transversal t(n);
  BudgetMeter meter(budget);
  return t.index(k, meter);
}

namespace {

class FMapOracle final : public OracleImpl {
 public:
  FMapOracle(std::shared_ptr<Transversal> t, std::uint64_t budget) : t_(std::move(t)), budget_(budget) {}

  Code mul(Code a, Code b) const override {
    BudgetMeter meter(budget_);
    const GroupOracle& g = t_->source().oracle();
    Code product = g.mul(t_->image(a, meter), t_->image(b, meter));
    return t_->position_of_image(product, meter);
  }

 private:
  std::shared_ptr<Transversal> t_;
  std::uint64_t budget_;
};

}  // namespace

GroupOracle f_map(const MarkedGroup& n, std::uint64_t budget) {
  auto t = std::make_shared<Transversal>(n);
  return GroupOracle("f(" + n.provenance() + ")", std::make_shared<FMapOracle>(std::move(t), budget));
}

ContinuityModulus continuity_modulus_of(const MarkedGroup& n, Code a, Code b, std::uint64_t budget) {
  Transversal t(n);
  BudgetMeter meter(budget);
  const Code product = n.oracle().mul(t.image(a, meter), t.image(b, meter));
  const std::size_t c = t.position_of_image(product, meter);
  const Index ia = t.index(a, meter), ib = t.index(b, meter), ic = t.index(c, meter);
  return {Word::generator(ia) * Word::generator(ib) * inv(Word::generator(ic)), std::max({ia, ib, ic})};
}

std::vector<Word> ContinuityModulus::words() const {
  std::vector<Word> out{product};
  for (Index j = 1; j <= top; ++j)
    for (Index i = 0; i < j; ++i) out.push_back(Word::generator(i) * inv(Word::generator(j)));
  return out;
}

bool ContinuityModulus::agree(const MarkedGroup& n, const MarkedGroup& other) const {
  if (n.contains(product) != other.contains(product)) return false;
  // Relabel each coset by its first generator; equal labellings mean the
  // same answers on every x_i x_j^-1.
  std::unordered_map<Code, Index> first_n, first_o;
  for (Index i = 0; i <= top; ++i) {
    const Index ln = first_n.emplace(n.generator_image(i), i).first->second;
    const Index lo = first_o.emplace(other.generator_image(i), i).first->second;
    if (ln != lo) return false;
  }
  return true;
}

std::vector<Word> continuity_modulus(const MarkedGroup& n, Code a, Code b, std::uint64_t budget) {
  return continuity_modulus_of(n, a, b, budget).words();
}

std::vector<Word> anchor_words(Index prefix, std::size_t count) {
  if (prefix == 0 || count == 0) return {Word()};
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(enumerate(Integer(static_cast<unsigned long>(k)), prefix));
  return out;
}

MarkedGroup openness_witness(const GroupOracle& h, const Anchor& anchor, std::uint64_t budget) {
  const MarkedGroup& base = anchor.base;
  const Index prefix = anchor.prefix;
  Transversal t(base);
  BudgetMeter meter(budget);

  // α on x_0 .. x_{K-1}: transversal position of each generator's coset.
  std::map<Index, Code> alpha;
  for (Index i = 0; i < prefix; ++i) alpha[i] = t.position_of_generator(i, meter);

  // Position of the identity coset, found through the least generator in N0.
  Index ie = 0;
  for (;; ++ie) {
    meter.charge("identity generator scan");
    if (base.generator_image(ie) == base.identity()) break;
  }
  const Code e_pos = t.position_of_generator(ie, meter);

  std::vector<Word> words = anchor.words.empty() ? anchor_words(prefix) : anchor.words;
  for (const Word& w : words)
    if (auto top = w.max_index(); top && *top >= prefix)
      throw AnchorViolation("anchor word " + w.str() + " uses a generator beyond the prefix");

  if (h.mul(e_pos, e_pos) != e_pos)
    throw AnchorViolation("target identity is not " + std::to_string(e_pos));
  const Assignment alpha_assignment(alpha);
  for (const Word& w : words) {
    const bool in_base = base.contains(w);
    const bool in_target = evaluate(w, alpha_assignment, h) == e_pos;
    if (in_base != in_target)
      throw AnchorViolation("target disagrees with the anchor on " + w.str());
  }

  Assignment marking(alpha, Assignment::PairRow{prefix});
  MarkedGroup result = kernel_of_marking(h, marking);

  for (const Word& w : words)
    if (result.contains(w) != base.contains(w))
      throw Error("openness witness lost agreement on " + w.str());
  GroupOracle image = f_map(result, budget);
  constexpr Code kCheck = 4;
  for (Code a = 0; a < kCheck; ++a)
    for (Code b = 0; b < kCheck; ++b)
      if (image.mul(a, b) != h.mul(a, b)) throw Error("openness witness does not map onto the target");
  return result;
}

}  // namespace twospaces
