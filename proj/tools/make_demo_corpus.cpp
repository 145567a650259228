// Writes the synthetic demo inputs (messages, price, control, config) into a
// directory. Usage: make_demo_corpus <dir> [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "oracles/planted_corpus.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <dir> [seed]\n", argv[0]);
    return 1;
  }
  brandpulse::oracle::PlantedOptions opts;
  if (argc > 2) opts.seed = std::strtoull(argv[2], nullptr, 10);
  const auto pc = brandpulse::oracle::make_planted_corpus(opts);
  brandpulse::oracle::write_planted_inputs(pc, argv[1]);
  std::printf("wrote %zu messages over %d weeks to %s\n", pc.messages.size(), opts.weeks, argv[1]);
  return 0;
}
