#include "gnvort/cli.hpp"

int main(int argc, char** argv) { return gnvort::cli_main(argc, argv); }
