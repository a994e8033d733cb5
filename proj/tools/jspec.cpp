#include "jacobi/cli.hpp"

int main(int argc, char** argv) { return jacobi::main_cli(argc, argv); }
