#include <cstdio>

#include "glnp/arith.hpp"

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "glnp-cli: not wired up yet\n");
  return 2;
}
