#include "parafree/nil_witness.hpp"

#include "parafree/error.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>

namespace parafree {

void SearchBounds::validate() const {
  if (dims.empty() || primes.empty())
    throw Error(ErrorCode::InvalidBounds, "search bounds need at least one dimension and prime");
  for (int n : dims)
    if (n < kMinUtDimension || n > kMaxUtDimension)
      throw Error(ErrorCode::InvalidBounds, "dimension " + std::to_string(n) + " outside [3, 5]");
  for (int p : primes)
    if (!is_prime(p) || p > 997)
      throw Error(ErrorCode::InvalidBounds, std::to_string(p) + " is not a supported prime");
  if (exhaustive_cap == 0 && sample_count == 0)
    throw Error(ErrorCode::InvalidBounds, "cap and sample count are both zero");
}

Determination abelian_survival(const Presentation& p, const Word& word) {
  const auto rank = static_cast<Eigen::Index>(p.generators.rank());
  const Cokernel cokernel(relation_matrix(p), rank);
  const ExponentVector x = exponent_vector(word, p.generators.rank());
  const CokernelElement image = cokernel.image(x.cast<long>().cast<Integer>());
  const auto& torsion = cokernel.invariants().torsion;

  for (int prime = 2; prime <= kAbelianPrimeCap; ++prime) {
    if (!is_prime(prime)) continue;
    for (std::size_t i = 0; i < image.free.size(); ++i)
      if (image.free[i] % prime != 0)
        return Determination::yes(
            "abelian_image", SurvivalCertificate{"free[" + std::to_string(i) + "]", image.free[i],
                                                 Integer(prime), Integer(prime)});
    for (std::size_t j = 0; j < torsion.size(); ++j) {
      if (torsion[j] % prime != 0) continue;
      Integer q = 1;
      Integer rest = torsion[j];
      while (rest % prime == 0) {
        rest /= prime;
        q *= prime;
      }
      if (image.torsion[j] % q != 0)
        return Determination::yes("abelian_image",
                                  SurvivalCertificate{"torsion[" + std::to_string(j) + "]",
                                                      image.torsion[j], Integer(prime), q});
    }
  }
  return Determination::unknown("abelian_image",
                                AbelianImageCertificate{cokernel.invariants(), image, std::nullopt});
}

namespace {

const Edge& cyclic_edge(const GraphOfGroups& g, std::string_view edge) {
  const Edge& e = g.edge(edge);
  if (e.group != EdgeGroup::InfiniteCyclic)
    throw Error(ErrorCode::EdgeNotCyclic, "edge '" + e.id + "' has trivial edge group");
  return e;
}

// One (n, p) search over a presentation. Generators that occur in no relation
// and not in the survivor are pinned to the identity (their lexicographically
// least image); the remaining ones are assigned in index order.
class TargetSearch {
 public:
  TargetSearch(const Presentation& pres, const Word& survivor, int n, int p)
      : pres_(pres), survivor_(survivor), n_(n), p_(p), order_(ut_group_order(n, p)) {
    const std::size_t m = pres.generators.rank();
    std::vector<bool> used(m, false);
    auto mark = [&](const Word& w) {
      for (Letter l : w.letters()) used[generator_of(l)] = true;
    };
    for (const auto& r : pres.relations) mark(r.relator);
    mark(survivor);
    std::vector<int> level_of(m, -1);
    for (std::size_t g = 0; g < m; ++g)
      if (used[g]) {
        level_of[g] = static_cast<int>(levels_.size());
        levels_.push_back(g);
      }
    auto last_level = [&](const Word& w) {
      int last = -1;
      for (Letter l : w.letters()) last = std::max(last, level_of[generator_of(l)]);
      return last;
    };
    checks_.resize(levels_.size());
    for (std::size_t r = 0; r < pres.relations.size(); ++r) {
      const int level = last_level(pres.relations[r].relator);
      if (level >= 0) checks_[static_cast<std::size_t>(level)].push_back(r);
    }
    survivor_level_ = last_level(survivor);
  }

  std::size_t levels() const { return levels_.size(); }
  std::uint64_t order() const { return order_; }

  struct Frame {
    std::vector<UtElement> images;
    std::vector<UtElement> inverses;
    std::vector<std::uint64_t> chosen;  // image index per level
  };

  Frame fresh_frame() const {
    const UtElement id = UtElement::identity(n_, p_);
    const std::size_t m = pres_.generators.rank();
    return {std::vector<UtElement>(m, id), std::vector<UtElement>(m, id),
            std::vector<std::uint64_t>(levels_.size(), 0)};
  }

  struct BranchResult {
    bool found = false;
    bool budget_hit = false;
    std::uint64_t nodes = 0;  // nodes visited (through the witness if found)
    std::vector<std::uint64_t> chosen;
  };

  /// Depth-first search below a fixed first-level image, visiting at most
  /// `budget` nodes.
  BranchResult branch(std::uint64_t first, std::uint64_t budget) const {
    Frame f = fresh_frame();
    BranchResult out;
    if (descend(f, 0, first, first + 1, budget, out)) {
      out.found = true;
      out.chosen = f.chosen;
    }
    return out;
  }

  /// Tries one complete assignment drawn from `rng`.
  bool sample(Frame& f, std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::uint64_t> pick(0, order_ - 1);
    for (std::size_t level = 0; level < levels_.size(); ++level) assign(f, level, pick(rng));
    for (std::size_t level = 0; level < levels_.size(); ++level)
      if (!consistent(f, level)) return false;
    return true;
  }

  NilWitness build(const Frame& f, std::string edge) const {
    NilWitness w;
    w.n = n_;
    w.p = p_;
    w.generators = pres_.generators.names();
    w.images = f.images;
    w.edge = std::move(edge);
    w.surviving_word = survivor_;
    for (const auto& r : pres_.relations) w.checked_relations.push_back(r.id);
    return w;
  }

  void assign(Frame& f, std::size_t level, std::uint64_t index) const {
    const std::size_t g = levels_[level];
    f.images[g] = UtElement::from_index(n_, p_, index);
    f.inverses[g] = f.images[g].inverse();
    f.chosen[level] = index;
  }

 private:
  UtElement eval(const Frame& f, const Word& w) const {
    UtElement acc = UtElement::identity(n_, p_);
    for (Letter l : w.letters()) {
      const std::size_t g = generator_of(l);
      acc = acc * (l > 0 ? f.images[g] : f.inverses[g]);
    }
    return acc;
  }

  bool consistent(const Frame& f, std::size_t level) const {
    for (std::size_t r : checks_[level])
      if (!eval(f, pres_.relations[r].relator).is_identity()) return false;
    if (survivor_level_ == static_cast<int>(level) && eval(f, survivor_).is_identity())
      return false;
    return true;
  }

  bool descend(Frame& f, std::size_t level, std::uint64_t lo, std::uint64_t hi,
               std::uint64_t budget, BranchResult& out) const {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      if (out.nodes >= budget) {
        out.budget_hit = true;
        return false;
      }
      ++out.nodes;
      assign(f, level, idx);
      if (!consistent(f, level)) continue;
      if (level + 1 == levels_.size()) return true;
      if (descend(f, level + 1, 0, order_, budget, out)) return true;
      if (out.budget_hit) return false;
    }
    return false;
  }

  const Presentation& pres_;
  const Word& survivor_;
  int n_;
  int p_;
  std::uint64_t order_;
  std::vector<std::size_t> levels_;
  std::vector<std::vector<std::size_t>> checks_;
  int survivor_level_ = -1;
};

std::uint64_t mix_seed(std::uint64_t seed, int n, int p) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(p)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

// Exhaustive phase. Branches (first-level images) are searched independently
// and merged in index order, so the outcome is the lexicographically least
// witness within the first `cap` nodes whatever the worker count.
struct ExhaustiveResult {
  std::optional<std::vector<std::uint64_t>> chosen;
  std::uint64_t nodes = 0;
  bool exhausted = false;
};

ExhaustiveResult exhaustive(const TargetSearch& search, std::uint64_t cap, unsigned workers) {
  ExhaustiveResult out;
  const std::uint64_t branches = search.order();
  std::vector<std::optional<TargetSearch::BranchResult>> results(branches);
  std::mutex mu;
  std::uint64_t merged = 0;       // branches folded into `cumulative`
  std::uint64_t cumulative = 0;   // nodes in the merged prefix
  bool stop = false;
  bool capped = false;
  std::optional<std::uint64_t> winner;
  std::atomic<std::uint64_t> next{0};

  auto fold = [&]() {  // caller holds mu
    while (!stop && merged < branches && results[merged]) {
      const auto& r = *results[merged];
      if (r.found && cumulative + r.nodes <= cap) {
        winner = merged;
        cumulative += r.nodes;
        stop = true;
      } else if (r.found || r.budget_hit || cumulative + r.nodes > cap) {
        capped = true;
        cumulative = cap;
        stop = true;
      } else {
        cumulative += r.nodes;
        ++merged;
      }
    }
    if (!stop && merged == branches) stop = true;
  };

  auto work = [&]() {
    while (true) {
      std::uint64_t budget;
      const std::uint64_t b = next.fetch_add(1);
      {
        std::lock_guard lock(mu);
        if (stop || b >= branches) return;
        budget = cap - cumulative;  // >= the budget left when b is merged
      }
      auto r = search.branch(b, budget);
      std::lock_guard lock(mu);
      results[b] = std::move(r);
      fold();
    }
  };

  if (search.levels() == 0) {
    out.exhausted = true;
    return out;
  }
  const unsigned n = std::max(1u, workers);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  out.nodes = cumulative;
  if (winner) {
    out.chosen = results[*winner]->chosen;
  } else {
    out.exhausted = !capped;
  }
  return out;
}

}  // namespace

SearchOutcome search_witness(const Presentation& p, const Word& survivor, std::string edge_label,
                             const SearchBounds& bounds, const SearchOptions& options) {
  bounds.validate();
  SearchOutcome outcome;
  if (survivor.empty()) return outcome;
  for (int n : bounds.dims) {
    for (int prime : bounds.primes) {
      const TargetSearch search(p, survivor, n, prime);
      SearchTargetReport report{n, prime, 0, 0, false};
      auto frame = search.fresh_frame();

      auto ex = exhaustive(search, bounds.exhaustive_cap, options.workers);
      report.nodes = ex.nodes;
      report.exhausted = ex.exhausted;
      if (ex.chosen) {
        for (std::size_t level = 0; level < ex.chosen->size(); ++level)
          search.assign(frame, level, (*ex.chosen)[level]);
        outcome.report.targets.push_back(report);
        outcome.witness = search.build(frame, edge_label);
        return outcome;
      }
      if (!ex.exhausted) {
        std::mt19937_64 rng(mix_seed(bounds.seed, n, prime));
        for (std::uint64_t s = 0; s < bounds.sample_count; ++s) {
          ++report.samples;
          if (search.sample(frame, rng)) {
            outcome.report.targets.push_back(report);
            outcome.witness = search.build(frame, edge_label);
            return outcome;
          }
        }
      }
      outcome.report.targets.push_back(report);
    }
  }
  return outcome;
}

SearchOutcome search_witness(const GraphOfGroups& g, std::string_view edge,
                             const SearchBounds& bounds, const SearchOptions& options) {
  const Edge& e = cyclic_edge(g, edge);
  const Presentation p = present(g);
  return search_witness(p, lift(p, e.from, e.u), e.id, bounds, options);
}

Determination abelian_witness(const GraphOfGroups& g, std::string_view edge) {
  const Edge& e = cyclic_edge(g, edge);
  const Presentation p = present(g);
  return abelian_survival(p, lift(p, e.from, e.u));
}

bool verify_witness(const Presentation& p, const NilWitness& w) {
  if (w.generators != p.generators.names() || w.images.size() != w.generators.size()) return false;
  for (const auto& img : w.images)
    if (img.dimension() != w.n || img.modulus() != w.p) return false;
  if (w.surviving_word.support_rank() > w.images.size()) return false;
  std::vector<std::string> ids;
  for (const auto& r : p.relations) {
    ids.push_back(r.id);
    if (!eval_word(w.images, r.relator).is_identity()) return false;
  }
  if (ids != w.checked_relations) return false;
  return !eval_word(w.images, w.surviving_word).is_identity();
}

bool verify_witness(const GraphOfGroups& g, const NilWitness& w) {
  auto idx = g.edge_index(w.edge);
  if (!idx || g.edges()[*idx].group != EdgeGroup::InfiniteCyclic) return false;
  const Edge& e = g.edges()[*idx];
  const Presentation p = present(g);
  if (w.surviving_word != lift(p, e.from, e.u)) return false;
  return verify_witness(p, w);
}

}  // namespace parafree
