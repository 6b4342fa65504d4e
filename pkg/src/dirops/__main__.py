from dirops.cli import main

main()
