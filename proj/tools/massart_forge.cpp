#include "massart/cli.hpp"

int main(int argc, char** argv) { return massart::cli::run(argc, argv); }
