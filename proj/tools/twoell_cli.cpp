#include "twoell/cli.hpp"

int main(int argc, char** argv) { return twoell::cli::run(argc, argv); }
