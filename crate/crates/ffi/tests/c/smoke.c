#include <math.h>
#include <stdio.h>
#include <string.h>

#include "newsreuse.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      const char *e = nr_last_error();                               \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              e ? e : "no error");                                   \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(int argc, char **argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: smoke TARGET SOURCE\n");
    return 2;
  }

  uint64_t counts[9] = {31, 217, 135, 130, 204, 144, 42, 72, 112};
  NrChiSquare chi;
  CHECK(nr_chi_square(counts, 3, 3, &chi) == NR_STATUS_OK);
  CHECK(chi.df == 4);
  CHECK(fabs(chi.statistic - 78.3638708973132) < 1e-9);

  float v[16];
  CHECK(nr_hash_embed("Flood waters reached the town", 16, v, 16) == NR_STATUS_OK);
  float sim = 0;
  CHECK(nr_cosine(v, v, 16, &sim) == NR_STATUS_OK);
  CHECK(fabsf(sim - 1.0f) < 1e-5f);
  CHECK(nr_hash_embed("x", 16, v, 8) == NR_STATUS_BUFFER_TOO_SMALL);
  CHECK(nr_last_error() != NULL);

  NrCorpus *target = NULL, *source = NULL;
  CHECK(nr_corpus_load(argv[1], NR_ROLE_TARGET, NULL, &target) == NR_STATUS_OK);
  CHECK(nr_corpus_load(argv[2], NR_ROLE_SOURCE, "en,de", &source) == NR_STATUS_OK);
  NrMatchSet *set = NULL;
  CHECK(nr_match_run(target, source, 0.6f, 384, 2, &set) == NR_STATUS_OK);
  NrAccounting acc;
  CHECK(nr_match_set_accounting(set, &acc) == NR_STATUS_OK);
  printf("raw=%llu true=%llu earliest=%llu fp=%llu\n",
         (unsigned long long)acc.raw.pairs,
         (unsigned long long)acc.true_matches.pairs,
         (unsigned long long)acc.earliest.pairs,
         (unsigned long long)acc.false_positives.pairs);
  nr_match_set_free(set);
  nr_corpus_free(source);
  nr_corpus_free(target);
  return 0;
}
