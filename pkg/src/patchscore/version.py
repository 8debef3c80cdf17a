VERSION = "0.1.0"
TOOL = f"patchscore {VERSION}"
