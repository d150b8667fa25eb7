#include "momentkit/cli.hpp"

int main(int argc, char** argv) { return momentkit::cli::main(argc, argv); }
