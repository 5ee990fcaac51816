#include "scelo/cli.hpp"

int main(int argc, char** argv) { return scelo::cli::run(argc, argv); }
