#include "shotnoise/cli.hpp"

int main(int argc, char** argv) { return shotnoise::cli_main(argc, argv); }
