#include "tabuforge/harness.hpp"

int main(int argc, char** argv) {
  return tabuforge::cli::run_main(argc, argv);
}
