from boundaryk.cli import main

raise SystemExit(main())
