#include <string>
#include <vector>

#include "wigdyn/cli_app.hpp"

int main(int argc, char** argv) {
  return wigdyn::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
