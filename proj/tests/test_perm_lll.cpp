#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <resamp/perm_lll.hpp>
#include <resamp/wdag.hpp>

using namespace resamp;

namespace {

int atomic_id(int n, Cell c) { return c.x * n + c.y; }

// e_pi^T A_I e_E computed directly from the atomic swap matrices.
Rat product_entry(const OracleSystem& atomic, int n, int pi_idx,
                  const std::vector<Cell>& i_cells, const std::vector<Cell>& c_cells) {
  ExactVec vec = indicator(atomic.space.n, perm_event(n, c_cells));
  for (auto it = i_cells.rbegin(); it != i_cells.rend(); ++it)
    vec = mat_apply(atomic.matrix(atomic_id(n, *it)), vec);
  return vec[pi_idx];
}

}  // namespace

TEST_CASE("permutations enumerate lexicographically and index back") {
  auto perms = all_perms(3);
  REQUIRE(perms.size() == 6);
  CHECK(perms.front() == std::vector<int>{0, 1, 2});
  CHECK(perms.back() == std::vector<int>{2, 1, 0});
  for (int n : {1, 2, 3, 4}) {
    auto ps = all_perms(n);
    for (size_t i = 0; i < ps.size(); ++i)
      CHECK(perm_index(ps[i]) == static_cast<int>(i));
  }
  StateSpace sp = perm_space(3);
  CHECK(sp.n == 6);
  CHECK(sp.names[0] == "123");
  CHECK(sp.names[5] == "321");
  CHECK_NOTHROW(sp.validate());
}

TEST_CASE("cell stability means pairwise distinct rows and columns") {
  CHECK(cells_stable({}));
  CHECK(cells_stable({{0, 0}}));
  CHECK(cells_stable({{0, 0}, {1, 1}}));
  CHECK(!cells_stable({{0, 0}, {0, 1}}));
  CHECK(!cells_stable({{0, 1}, {1, 1}}));

  auto sets = stable_cell_sets(3, 2);
  CHECK(sets.size() == 28);  // empty + 9 cells + 18 stable pairs
  for (const auto& s : sets) CHECK(cells_stable(s));
  CHECK(stable_cell_sets(3, 3).size() == 34);  // adds the 6 permutation matrices

  // Cross-check against the definition by brute force.
  int count = 1 + 9;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      if (cells_stable({{a / 3, a % 3}, {b / 3, b % 3}})) ++count;
  CHECK(static_cast<int>(sets.size()) == count);
}

TEST_CASE("cell events pin images") {
  CHECK(perm_event(3, {{0, 0}}) == Event{0, 1});
  CHECK(perm_event(3, {{0, 0}, {1, 1}, {2, 2}}) == Event{0});
  CHECK(perm_event(3, {}).size() == 6);
  for (int n : {3, 4}) {
    for (const auto& cells : stable_cell_sets(n, 2)) {
      Rat want = factorial(static_cast<unsigned>(n - cells.size()));
      CHECK(Rat(static_cast<long>(perm_event(n, cells).size())) == want);
    }
  }
  // Conflicting cells are unsatisfiable.
  CHECK(perm_event(3, {{0, 0}, {0, 1}}).empty());
}

TEST_CASE("atomic swap system is a commuting injective regenerating oracle") {
  OracleSystem sys = perm_atomic_system(3);
  REQUIRE(sys.flaw_count() == 9);
  CHECK(sys.flaws[atomic_id(3, {0, 1})].name == "p12");
  for (int f = 0; f < 9; ++f) {
    CHECK(sys.mu_of(f) == Rat(1, 3));
    CHECK(charge(sys, f) == Rat(1, 3));
    CHECK(distortion(sys, f) == 1);
  }
  CHECK(sys.dep.related(atomic_id(3, {0, 0}), atomic_id(3, {0, 1})));
  CHECK(sys.dep.related(atomic_id(3, {0, 0}), atomic_id(3, {2, 0})));
  CHECK(!sys.dep.related(atomic_id(3, {0, 0}), atomic_id(3, {1, 1})));

  SystemReport rep = check_system(sys, 2);
  CHECK(rep.sound_and_commutative());
  CHECK(rep.regeneration.ok);
  CHECK(rep.injectivity.ok);
}

TEST_CASE("paths with both endpoints among target cells") {
  // An isolated target cell is its own degenerate path.
  CHECK(c_path_endpoints({}, {{0, 0}}) == std::vector<Cell>{{0, 0}});
  // One conditioning cell linking two target cells keeps both endpoints.
  CHECK(c_path_endpoints({{0, 1}}, {{0, 0}, {1, 1}}) ==
        std::vector<Cell>({{0, 0}, {1, 1}}));
  // A dangling conditioning cell kills the path.
  CHECK(c_path_endpoints({{0, 1}}, {{0, 0}}).empty());
  // A cycle has no endpoints at all.
  CHECK(c_path_endpoints({{0, 1}, {1, 0}}, {{0, 0}, {1, 1}}).empty());
}

TEST_CASE("active conditions by case") {
  // No conditioning cells: the target cells pin themselves.
  CHECK(active_conditions({}, {{0, 0}, {1, 1}}) == std::vector<Cell>({{0, 0}, {1, 1}}));
  // A path across one conditioning cell pins the crossed-over cell.
  CHECK(active_conditions({{0, 1}}, {{0, 0}, {1, 1}}) ==
        std::vector<Cell>({{0, 1}, {1, 0}}));
  // A cycle pins nothing beyond the conditioning cells themselves.
  CHECK(active_conditions({{0, 1}, {1, 0}}, {{0, 0}, {1, 1}}) ==
        std::vector<Cell>({{0, 1}, {1, 0}}));
  // A cell that is both conditioned and targeted only pins itself.
  CHECK(active_conditions({{0, 0}}, {{0, 0}}) == std::vector<Cell>{{0, 0}});
  CHECK_THROWS(active_conditions({{0, 0}, {0, 1}}, {}));
  CHECK_THROWS(active_conditions({}, {{0, 0}, {1, 0}}));
}

TEST_CASE("closed-form values for the frozen cases") {
  auto perms = all_perms(3);
  // Path: starting permutations must satisfy (0,1) and (1,0).
  std::vector<int> pi = {1, 0, 2};
  CHECK(closed_form_entry(3, pi, {{0, 1}}, {{0, 0}, {1, 1}}) == Rat(1, 3));
  CHECK(closed_form_entry(3, {0, 1, 2}, {{0, 1}}, {{0, 0}, {1, 1}}) == 0);
  // Cycle: value 1/n^2 once both conditioning cells hold.
  CHECK(closed_form_entry(3, pi, {{0, 1}, {1, 0}}, {{0, 0}, {1, 1}}) == Rat(1, 9));
  // Conditioned on the target itself: one swap must fix it, probability 1/n.
  CHECK(closed_form_entry(3, {0, 1, 2}, {{0, 0}}, {{0, 0}}) == Rat(1, 3));
}

TEST_CASE("closed form equals the matrix product everywhere") {
  const int n = 3;
  OracleSystem atomic = perm_atomic_system(n);
  auto perms = all_perms(n);
  auto sets = stable_cell_sets(n, 2);
  long long checked = 0;
  for (const auto& i_cells : sets) {
    for (const auto& c_cells : sets) {
      for (size_t p = 0; p < perms.size(); ++p) {
        Rat direct = product_entry(atomic, n, static_cast<int>(p), i_cells, c_cells);
        Rat closed = closed_form_entry(n, perms[p], i_cells, c_cells);
        CHECK(direct == closed);
        ++checked;
      }
    }
  }
  CHECK(checked == 28 * 28 * 6);
}

TEST_CASE("swap order inside a stable set is immaterial") {
  OracleSystem atomic = perm_atomic_system(4);
  SparseMatrix a = atomic.matrix(atomic_id(4, {0, 0}));
  SparseMatrix b = atomic.matrix(atomic_id(4, {1, 2}));
  CHECK(mat_mul(a, b) == mat_mul(b, a));
}

TEST_CASE("event bounds over composed cell flaws") {
  SeededSystem seeded = perm_seeded_system(4, {{0, 0}, {1, 1}});
  OracleSystem comp = composed_system(seeded, {{0}, {1}});
  std::vector<Rat> gamma = charges(comp);
  REQUIRE(gamma == std::vector<Rat>{Rat(1, 4), Rat(1, 4)});
  std::vector<std::vector<Cell>> flaw_cells = {{{0, 0}}, {{1, 1}}};

  PermEventBound empty = perm_event_bound(comp, 4, flaw_cells, gamma, {}, 12);
  CHECK(empty.mu_e == 1);
  CHECK(empty.value == 1);
  CHECK(empty.converged);

  // A target sharing no coordinate with any flaw keeps only its measure.
  PermEventBound apart = perm_event_bound(comp, 4, flaw_cells, gamma, {{2, 2}}, 12);
  CHECK(apart.mu_e == Rat(1, 4));
  CHECK(apart.value == Rat(1, 4));

  // Sharing a row brings in that flaw's weight sum.
  PermEventBound shared = perm_event_bound(comp, 4, flaw_cells, gamma, {{0, 3}}, 12);
  CHECK(shared.converged);
  CHECK(shared.value > shared.mu_e);
  CHECK(shared.value < Rat(1, 4) * (1 + Rat(1, 3)) + Rat(1, 1000));

  CHECK_THROWS(perm_event_bound(comp, 4, {{{0, 0}}}, gamma, {}, 12));
}
