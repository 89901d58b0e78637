#include <string>
#include <vector>

#include "mildns/app/commands.hpp"

int main(int argc, char** argv) {
  return mildns::app::run(std::vector<std::string>(argv, argv + argc));
}
