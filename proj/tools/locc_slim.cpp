#include "locc/cli.hpp"

int main(int argc, char** argv) { return locc::cli::run(argc, argv); }
