#include "cli.hpp"

int main(int argc, char** argv) {
  return svcmisc::cli::run(argc, argv);
}
