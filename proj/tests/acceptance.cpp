// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "f2_oracle.hpp"
#include "purity_oracle.hpp"
#include "qrep/covers.hpp"
#include "qrep/document.hpp"
#include "qrep/error.hpp"
#include "qrep/path_ring.hpp"
#include "rep_gen.hpp"

using namespace qrep;

namespace {

const CoefficientRing Z = CoefficientRing::integers();
const CoefficientRing Q = CoefficientRing::rationals();
const CoefficientRing F2 = CoefficientRing::prime_field(2);
const CoefficientRing F3 = CoefficientRing::prime_field(3);
const CoefficientRing F5 = CoefficientRing::prime_field(5);

// Collects the first failure; later checks still run so the detail names it.
struct Verdict {
  bool ok = true;
  std::string detail;
  std::string first_failure;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

/// Every coefficient vector over a prime field, for enumerating hom groups.
std::vector<Matrix> all_vectors(const CoefficientRing& f, std::size_t n) {
  const long p = static_cast<long>(f.characteristic());
  std::vector<Matrix> out;
  std::vector<long> digits(n, 0);
  while (true) {
    Matrix v(f, n, 1);
    for (std::size_t i = 0; i < n; ++i) v.set(i, 0, Scalar(digits[i]));
    out.push_back(v);
    std::size_t i = 0;
    while (i < n && ++digits[i] == p) digits[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict criterion_1() {
  Verdict v;
  for (const CoefficientRing& e : {Q, F5})
    for (std::size_t n : {2u, 3u}) {
      const std::string tag = e.symbol() + " n=" + std::to_string(n);
      const Representation x = nloop_rep(n, FGModule::free(e, 1));
      const AnnihilatorReport r = annihilator_witness(x);
      v.require(r.annihilates, tag + ": s does not kill the generators");
      v.require(r.s_nonzero, tag + ": s is zero");
      v.require(r.conditions_i && r.conditions_ii, tag + ": conditions (i)/(ii) fail");
      v.require(!r.divisible && !r.injective, tag + ": verdict is not 'not injective (not divisible)'");
      // an independent look at the witness: s·y = m has no solution y
      v.require(r.witness.has_value(), tag + ": no witness element");
      bool refused = false;
      try {
        is_injective_rep(x);
      } catch (const Refusal&) {
        refused = true;
      }
      v.require(refused, tag + ": the characterization was applied on a cyclic quiver");
    }
  v.detail = "n in {2,3}, E in {Q, F5}";
  return v;
}

Verdict criterion_2() {
  Verdict v;
  std::size_t total = 0, injective = 0;
  for (int n : {2, 3}) {
    const auto reps = f2::all_reps(n, 2);
    std::vector<std::vector<f2::SubRepF2>> subs;
    for (const auto& b : reps) subs.push_back(f2::subreps(b));
    for (const auto& x : reps) {
      const bool oracle = f2::injective_by_lifting(x, reps, subs);
      v.require(is_injective_rep(f2::to_library(x)) == oracle, "disagreement on A_" + std::to_string(n));
      ++total;
      injective += oracle;
    }
  }
  v.require(total == 31 + 499, "unexpected number of representations");
  v.detail = std::to_string(total) + " representations, " + std::to_string(injective) + " injective";
  return v;
}

FGModule module_from(const std::vector<long>& factors, std::size_t free_rank) {
  std::vector<FGModule> parts;
  for (long d : factors) parts.push_back(FGModule::cyclic(Z, Scalar(d)));
  if (free_rank) parts.push_back(FGModule::free(Z, free_rank));
  return parts.empty() ? FGModule::zero(Z) : direct_sum(parts);
}

// invariant factor chains d1 | d2 | ... with every d <= 8 and length <= 3
void chains(std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  out.push_back(cur);
  if (cur.size() == 3) return;
  for (long d = 2; d <= 8; ++d)
    if (cur.empty() || d % cur.back() == 0) {
      cur.push_back(d);
      chains(cur, out);
      cur.pop_back();
    }
}

bool is_prime_power(long n) {
  long p = 2;
  while (n % p) ++p;
  while (n % p == 0) n /= p;
  return n == 1;
}

/// Purity against every Z/n up to a generous bound, well past the sufficient
/// set. Z/n splits into its prime-power parts, so those are the only tests.
bool full_tensor_oracle(const Submodule& a) {
  const mpz_class documented = qtest::torsion_exponent_int(a.ambient()) * qtest::torsion_exponent_int(a.quotient());
  const long top = std::max<long>(64, documented.get_si());
  for (long n = 2; n <= top; ++n)
    if (is_prime_power(n) && !qtest::tensor_injective(a, n)) return false;
  return true;
}

Verdict criterion_3() {
  Verdict v;
  std::vector<std::vector<long>> all;
  std::vector<long> cur;
  chains(cur, all);
  std::size_t pairs = 0, pure = 0;
  for (const auto& factors : all)
    for (std::size_t free_rank = 0; factors.size() + free_rank <= 3; ++free_rank) {
      const FGModule b = module_from(factors, free_rank);
      const std::size_t g = b.generators();
      if (g == 0) continue;
      // submodules generated by one vector from a box, and by two from a smaller box
      const auto box = [&](long lo, long hi) {
        std::vector<Matrix> out;
        std::vector<long> digits(g, lo);
        while (true) {
          Matrix m(Z, g, 1);
          for (std::size_t i = 0; i < g; ++i) m.set(i, 0, Scalar(digits[i]));
          out.push_back(m);
          std::size_t i = 0;
          while (i < g && ++digits[i] > hi) digits[i++] = lo;
          if (i == g) break;
        }
        return out;
      };
      std::vector<Matrix> gens;
      for (const Matrix& m : box(-2, 4)) gens.push_back(m);
      const std::vector<Matrix> small = box(0, 2);
      for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = i + 1; j < small.size(); ++j) gens.push_back(Matrix::hstack(small[i], small[j]));
      for (const Matrix& m : gens) {
        const Submodule a(b, m);
        const bool fast = is_pure_submodule(a);
        v.require(fast == full_tensor_oracle(a), "disagreement in " + b.describe());
        ++pairs;
        pure += fast;
      }
    }
  v.detail = std::to_string(pairs) + " pairs, " + std::to_string(pure) + " pure";
  return v;
}

Verdict criterion_4() {
  Verdict v;
  qtest::Gen gen(404);
  std::size_t instances = 0, transported = 0;
  for (const CoefficientRing& r : {F2, F3})
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = gen.uniform(2, 3);
      const Quiver q = Quiver::line(n);
      std::vector<FGModule> mods;
      for (std::size_t i = 0; i < n; ++i) mods.push_back(FGModule::free(r, gen.uniform(0, 2)));
      std::vector<Matrix> mats;
      for (std::size_t a = 0; a + 1 < n; ++a) {
        Matrix m(r, mods[a + 1].generators(), mods[a].generators());
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, r.normalize(Scalar(gen.uniform(0, 2))));
        mats.push_back(m);
      }
      const Representation x(q, r, mods, mats);
      const std::size_t vtx = gen.uniform(0, n - 1);
      const FGModule m = FGModule::free(r, 1);
      const AdjunctionCount c = adjunction_card_check(vtx, m, x);
      v.require(c.equal(), "cardinalities differ over " + r.symbol());
      const SFunctorImage s = s_functor(q, vtx, m);
      // every element of both hom sets, not just a basis
      const ModuleHomGroup hm = hom_module(m, x.module(vtx));
      for (const Matrix& coeff : all_vectors(r, hm.basis.size())) {
        const ModuleMap f = hm.combine(coeff);
        v.require(adjunction_to_module(s, adjunction_to_rep(s, x, f)).equals(f), "module-side round trip");
        ++transported;
      }
      const RepHomGroup h = rep_hom_group(s.rep, x);
      std::size_t rep_elements = 0;
      for (const Matrix& coeff : all_vectors(r, h.basis.size())) {
        const RepMorphism eta = h.combine(coeff);
        v.require(adjunction_to_rep(s, x, adjunction_to_module(s, eta)).equals(eta), "representation-side round trip");
        ++rep_elements;
        ++transported;
      }
      v.require(mpz_class(rep_elements) == c.rep_side, "hom-group enumeration disagrees with the count");
      ++instances;
    }
  v.require(instances >= 50, "fewer than 50 instances");
  v.detail = std::to_string(instances) + " instances, " + std::to_string(transported) + " maps transported";
  return v;
}

bool is_times(const RepMorphism& w, long c) {
  return w.source().vertex_count() == 1 && w.component(0).matrix() == Matrix::from_rows(Z, {{c}});
}

Verdict criterion_5() {
  Verdict v;
  const Quiver a2 = Quiver::line(2), pt = Quiver::single_vertex();
  const std::vector<Representation> samples = {
      Representation(pt, Z, {FGModule::free(Z, 1)}, {}),
      Representation(a2, Z, {FGModule::free(Z, 1), FGModule::free(Z, 1)}, {Matrix::from_rows(Z, {{2}})}),
      Representation(a2, Z, {FGModule::free(Z, 1), FGModule::free(Z, 2)}, {Matrix::from_rows(Z, {{1}, {0}})}),
      Representation(Quiver::line(3), Q, {FGModule::free(Q, 1), FGModule::free(Q, 1), FGModule::free(Q, 0)},
                     {Matrix::from_rows(Q, {{1}}), Matrix(Q, 0, 1)}),
  };
  for (const Representation& x : samples) {
    const CoverVerdict c = cover_verdict(RepMorphism::identity(x), free_family(x.quiver(), x.ring(), 2));
    v.require(c.cover == CoverStatus::IsCover, "identity on " + x.describe());
  }
  // Z -> Z/3 on a single vertex
  const Representation zr(pt, Z, {FGModule::free(Z, 1)}, {});
  const Representation z3(pt, Z, {FGModule::cyclic(Z, 3)}, {});
  const RepMorphism psi(zr, z3, std::vector<Matrix>{Matrix::from_rows(Z, {{1}})});
  const CoverVerdict c = cover_verdict(psi, free_family(pt, Z, 2));
  v.require(c.cover == CoverStatus::NotCover, "Z -> Z/3 is not reported NotCover");
  v.require(c.witness && is_times(*c.witness, 4), "witness is not multiplication by 4");
  if (c.witness) {
    v.require((psi * *c.witness).equals(psi), "witness does not satisfy psi f = psi");
    v.require(!c.witness->is_isomorphism(), "witness is an automorphism");
  }
  // kernel-square recipe on torsion-free M
  for (std::size_t rank : {1u, 2u}) {
    const RecipeResult r =
        build_recipe(Recipe::Ex3_8, {ModuleMap::identity(FGModule::free(Z, rank)), CoverKind::TorsionFree, {}, {}});
    const CoverVerdict cv = cover_verdict(r.candidate, default_family(Recipe::Ex3_8, r.candidate.source().quiver(), Z));
    v.require(cv.cover == CoverStatus::IsCover, "ex3.8 recipe on Z^" + std::to_string(rank));
  }
  // three-vertex flat recipe over the rationals
  const FGModule q2 = FGModule::free(Q, 2);
  const RecipeResult r =
      build_recipe(Recipe::Ex5_3_1, {ModuleMap::identity(q2), CoverKind::Flat, {}, ModuleMap::identity(q2)});
  const CoverVerdict cv = cover_verdict(r.candidate, default_family(Recipe::Ex5_3_1, r.candidate.source().quiver(), Q));
  v.require(cv.cover == CoverStatus::IsCover, "ex5.3.1 recipe over Q");
  v.detail = "identities, Z -> Z/3 with witness x4, ex3.8 on Z and Z^2, ex5.3.1 on Q^2";
  return v;
}

Verdict criterion_6() {
  Verdict v;
  qtest::Gen gen(606);
  std::size_t tested = 0, steps = 0;
  while (tested < 40) {
    const std::size_t n = gen.uniform(2, 3);
    const Representation x = qtest::random_line_rep(n, gen, 8, true);
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < n; ++i)
      if (x.module(i).generators() > 0) nonzero.push_back(i);
    if (nonzero.empty()) continue;
    const std::size_t vtx = nonzero[gen.uniform(0, nonzero.size() - 1)];
    Matrix val(Z, x.module(vtx).generators(), 1);
    for (std::size_t i = 0; i < val.rows(); ++i) val.set(i, 0, Scalar(gen.uniform(-8, 8)));
    const RepElement e{vtx, val};
    const PureClosure pc = pure_closure_rep(x, e);
    v.require(pc.result.contains(e), "closure misses the element");
    v.require(is_componentwise_pure_subrep(pc.result), "closure is not componentwise pure");
    // shape: generate, purify, generate, ... with the stages increasing
    v.require(!pc.trace.empty() && pc.trace.front().kind == ClosureStep::Kind::Generate, "trace does not start by generating");
    for (std::size_t i = 0; i < pc.trace.size(); ++i) {
      const ClosureStep& s = pc.trace[i];
      v.require(s.kind == (i % 2 == 0 ? ClosureStep::Kind::Generate : ClosureStep::Kind::Purify), "steps do not alternate");
      if (i > 0)
        for (std::size_t w = 0; w < n; ++w)
          v.require(s.parts[w].contains(pc.trace[i - 1].parts[w]), "stages are not increasing");
      if (s.kind == ClosureStep::Kind::Generate) v.require(is_closed_family(x, s.parts), "generated stage not closed");
      if (s.kind == ClosureStep::Kind::Purify)
        for (const Submodule& p : s.parts) v.require(is_pure_submodule(p), "purified stage not pure");
    }
    v.require(pc.trace.back().parts == pc.result.parts(), "trace does not end at the result");
    steps += pc.trace.size();
    ++tested;
  }
  v.detail = std::to_string(tested) + " representations, " + std::to_string(steps) + " steps";
  return v;
}

Verdict criterion_7() {
  Verdict v;
  const Quiver a2 = Quiver::line(2);
  const Representation times2(a2, Z, {FGModule::free(Z, 1), FGModule::free(Z, 1)}, {Matrix::from_rows(Z, {{2}})});
  const Representation split(a2, Z, {FGModule::free(Z, 1), FGModule::free(Z, 2)}, {Matrix::from_rows(Z, {{1}, {0}})});
  v.require(is_flat_cw(times2), "(Z -x2-> Z) not componentwise flat");
  v.require(is_categorical_flat(times2) == TriState::No, "(Z -x2-> Z) reported categorical flat");
  v.require(is_categorical_flat(split) == TriState::Yes, "(Z -(1,0)-> Z^2) not categorical flat");
  v.detail = "exact";
  return v;
}

Verdict criterion_8() {
  Verdict v;
  qtest::Gen gen(808);
  std::vector<Representation> battery;
  for (const Representation& x : free_family(Quiver::line(2), Z, 2).members) battery.push_back(x);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen.uniform(2, 3);
    std::vector<FGModule> mods;
    for (std::size_t i = 0; i < n; ++i) mods.push_back(FGModule::free(Z, gen.uniform(0, 3)));
    std::vector<Matrix> mats;
    for (std::size_t a = 0; a + 1 < n; ++a)
      mats.push_back(qtest::to_matrix(Z, gen.int_matrix(mods[a + 1].generators(), mods[a].generators(), -3, 3),
                                      mods[a].generators()));
    battery.emplace_back(Quiver::line(n), Z, mods, mats);
  }
  std::size_t stages = 0;
  for (const Representation& x : battery) {
    const Filtration f = small_filtration(x);
    for (std::size_t i = 0; i < f.steps.size(); ++i) {
      v.require(is_flat_cw(f.steps[i].quotient), "a quotient is not componentwise flat");
      if (i > 0) v.require(f.steps[i].stage.contains(f.steps[i - 1].stage), "chain is not increasing");
      v.require(f.steps[i].stage.contains(f.steps[i].element), "stage misses its element");
    }
    v.require(f.steps.empty() ? x.is_zero() : f.steps.back().stage.is_whole(), "union is not the input");
    stages += f.steps.size();
  }
  v.detail = std::to_string(battery.size()) + " representations, " + std::to_string(stages) + " stages";
  return v;
}

Verdict criterion_9() {
  Verdict v;
  std::size_t total = 0, intervals = 0;
  for (int n : {2, 3}) {
    const Quiver q = Quiver::line(n);
    for (const auto& x : f2::all_reps(n, 2)) {
      const Representation lib = f2::to_library(x);
      const Barcode b = decompose_interval(lib);
      v.require(f2::isomorphic(f2::from_library(reconstruct(b, q, F2)), x), "reconstruction not isomorphic");
      for (const Interval& i : b.intervals) {
        v.require(is_injective_rep(interval_rep(q, F2, i.start, i.end)) == i.injective,
                  "injective tag of " + i.to_string() + " disagrees");
        ++intervals;
      }
      ++total;
    }
  }
  v.detail = std::to_string(total) + " representations, " + std::to_string(intervals) + " distinct intervals";
  return v;
}

struct CliRun {
  int code;
  std::string out, err;
  bool operator==(const CliRun& o) const { return code == o.code && out == o.out && err == o.err; }
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qrep::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Verdict criterion_10() {
  Verdict v;
  const std::string data = QREP_TEST_DATA;
  const std::string aux = data + "/aux.json";
  const std::vector<std::vector<std::string>> builds = {
      {"cover", "build", "ex3.8", "--phi", "id_Z"},
      {"cover", "build", "ex5.2", "--phi", "id_Q"},
      {"cover", "build", "ex5.3.1", "--phi", "id_Q^2", "--envelope", "id_Q^2"},
      {"cover", "build", "ex5.1.1", "--phi", "phi", "--aux", "aux", aux},
      {"cover", "build", "ex5.1.2", "--phi", "phi", "--aux", "aux", aux},
      {"cover", "build", "ex5.3.2", "--phi", "phi", "--aux", "aux", aux},
      {"cover", "build", "ex3.8", "--phi", "id_Z", "--format", "tree"},
  };
  std::size_t documents = 0, reports = 0;
  for (const auto& args : builds) {
    const CliRun r = cli(args);
    v.require(r.code == 0, "build failed: " + args[2]);
    if (r.code != 0) continue;
    try {
      v.require(document_text(parse_document_text(r.out)) == r.out, "round trip changed " + args[2]);
    } catch (const std::exception& e) {
      v.require(false, std::string("emitted document does not load: ") + e.what());
    }
    v.require(cli(args) == r, "build output differs between runs");
    ++documents;
  }
  const std::vector<std::vector<std::string>> commands = {
      {"check", data + "/flat_classes.json"},
      {"check", "--injective", data + "/two_loop.json", "L"},
      {"cover", "verify", data + "/covers.json", "psi"},
      {"cover", "verify", data + "/covers.json", "psi", "--format", "tree"},
      {"trace", "pure-closure", data + "/flat_classes.json", "X", "--element", "1@v1"},
      {"trace", "filtration", data + "/flat_classes.json", "C"},
      {"trace", "annihilator", data + "/two_loop.json"},
      {"trace", "barcode", data + "/line_field.json", "Z0"},
      {"decompose", data + "/line_field.json", "B"},
      {"classify-quiver", "v1 v2; a1: v1 -> v2"},
      {"run", data + "/covers.json"},
      {"run", data + "/two_loop.json"},
  };
  for (const auto& args : commands) {
    v.require(cli(args) == cli(args), "report differs between runs: " + args[0]);
    ++reports;
  }
  v.detail = std::to_string(documents) + " emitted documents, " + std::to_string(reports) + " reports";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Verdict()> run;
    double limit_seconds;  // 0 when untimed
  };
  const std::vector<Criterion> criteria = {
      {1, "n-loop annihilator: conditions hold, not injective", criterion_1, 1.0},
      {2, "injectivity vs lifting oracle, F2 on A_2/A_3", criterion_2, 300.0},
      {3, "purity vs cyclic tensor oracle", criterion_3, 0},
      {4, "adjunction counts and round trips over F2, F3", criterion_4, 0},
      {5, "cover verdicts", criterion_5, 0},
      {6, "pure closure battery over Z", criterion_6, 0},
      {7, "flat-class separation", criterion_7, 0},
      {8, "small filtrations of free representations", criterion_8, 0},
      {9, "barcodes: reconstruction and injective tags", criterion_9, 0},
      {10, "CLI round trip and determinism", criterion_10, 0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.first_failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      v.ok = false;
      if (v.first_failure.empty()) v.first_failure = "over the time limit";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << "criterion " << c.id << ": " << (v.ok ? "PASS" : "FAIL") << "  " << c.title << " (";
    if (!v.ok) std::cout << v.first_failure << "; ";
    std::cout << v.detail << (v.detail.empty() ? "" : "; ") << timing;
    if (c.limit_seconds > 0) std::cout << ", limit " << c.limit_seconds << " s";
    std::cout << ")" << std::endl;
    failures += !v.ok;
  }
  return failures == 0 ? 0 : 1;
}
