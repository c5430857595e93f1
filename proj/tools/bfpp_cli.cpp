#include <string>
#include <vector>

#include "bfpp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bfpp::run_main(args);
}
