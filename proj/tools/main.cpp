#include "banditlb/cli.hpp"

int main(int argc, char** argv) { return banditlb::cli::run(argc, argv); }
