#include "ratio_bandits/cli.hpp"

int main(int argc, char** argv) { return ratio_bandits::run_cli(argc, argv); }
