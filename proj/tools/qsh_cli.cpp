#include "qsh/cli.hpp"

int main(int argc, char** argv) { return qsh::run_cli(argc, argv); }
