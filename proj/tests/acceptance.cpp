#include <cstdlib>
#include <iostream>
#include <string>

#include "hx/selftest.hpp"

int main(int argc, char** argv) {
  hx::SelftestOptions o;
  o.corpus = argc > 1 ? argv[1] : HX_CORPUS_DIR;
  if (const char* s = std::getenv("HOARE_EXTRACT_SEED")) o.seed = std::stoull(s);
  o.jobs = 4;
  bool all = true;
  for (const auto& r : hx::run_acceptance(o, &std::cout)) all = all && r.pass;
  return all ? 0 : 1;
}
