#include "doekit/cli.hpp"

int main(int argc, char** argv) { return doekit::cli::run(argc, argv); }
