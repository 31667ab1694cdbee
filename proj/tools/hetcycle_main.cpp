#include "hetcycle/cli.hpp"

int main(int argc, char** argv) { return hetcycle::run_cli(argc, argv); }
