#include "relreward/cli.hpp"

int main(int argc, char** argv) {
  return relreward::cli::dispatch(std::vector<std::string>(argv, argv + argc));
}
