#include "bergman/cli.hpp"

int main(int argc, char** argv) { return bergman::run_main(argc, argv); }
