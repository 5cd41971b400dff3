#include "bandit_lab/cli.hpp"

int main(int argc, char** argv) { return bandit_lab::run_cli(argc, argv); }
