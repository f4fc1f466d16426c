#include "plcfh/cli/commands.hpp"

int main(int argc, char** argv)
{
    return plcfh::cli::run_cli(argc, argv);
}
