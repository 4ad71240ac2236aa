#include "wotforge/cli/app.hpp"

#include <iostream>
#include <string>
#include <unistd.h>

int main(int argc, char** argv) {
  using namespace wotforge;
  cli::CliContext ctx{std::cout, std::cerr, std::make_shared<cli::PosixRunner>(),
                      std::make_shared<fetch::HttplibTransport>()};
  if (isatty(STDIN_FILENO)) {
    ctx.confirm = [](const std::string& question) {
      std::cerr << question << " [y/N] " << std::flush;
      std::string answer;
      std::getline(std::cin, answer);
      return answer == "y" || answer == "Y" || answer == "yes";
    };
  }
  return cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), ctx);
}
