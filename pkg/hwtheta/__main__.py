from hwtheta.cli import main

main()
