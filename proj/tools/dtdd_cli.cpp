#include <string>
#include <vector>

#include "dtdd/harness.hpp"

int main(int argc, char** argv) {
  return dtdd::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
