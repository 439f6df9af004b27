#include "doctest.h"
#include "props.hpp"

using namespace props;

namespace {

const std::vector<Site>& sites() {
  static std::vector<Site> s = sample_sites(corpus_env(), 1500, 7);
  return s;
}

void require(const Outcome& o, size_t want) {
  INFO(o.line());
  CHECK(o.failures == 0);
  CHECK(o.checked >= want);
}

}  // namespace

TEST_CASE("alpha equivalence is an equivalence on random terms") { require(alpha_laws(1000), 1000); }

TEST_CASE("shift and substitution agree with the named oracle") {
  require(shift_subst_laws(500), 500);
}

TEST_CASE("types of corpus subterms are unique up to conversion") {
  require(unique_typing(corpus_env(), sites(), 200), 200);
}

TEST_CASE("beta steps preserve types") {
  require(subject_reduction(corpus_env(), sites(), 200), 200);
}

TEST_CASE("normal forms are idempotent and redex free") {
  require(normalize_laws(corpus_env(), sites(), 100), 100);
}

TEST_CASE("redex detection") {
  auto id = ldc::mk_lam("x", ldc::mk_star(), ldc::mk_var(0));
  CHECK_FALSE(redex_free(corpus_env(), ldc::mk_app(id, ldc::mk_star())));
  CHECK_FALSE(redex_free(corpus_env(), ldc::mk_const("Bot")));
  CHECK(redex_free(corpus_env(), ldc::mk_const("exc_thrd", {ldc::mk_var(0)})));
}
