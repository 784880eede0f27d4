#include "fne/cli.hpp"

int main(int argc, char** argv) { return fne::run_cli(argc, argv); }
