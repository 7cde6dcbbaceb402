#include "cli.hpp"

int main(int argc, char** argv) { return twinscope::cli::run(argc, argv); }
