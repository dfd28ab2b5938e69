#include "aaul/cli.hpp"

int main(int argc, char** argv) { return aaul::cli::run(argc, argv); }
