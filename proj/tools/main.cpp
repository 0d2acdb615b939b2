#include "cli.hpp"

int
main(int argc, char** argv)
{
  return twkde::cli::run(argc, argv);
}
