from importlib.metadata import version as _version

v = f"""VERSION={_version('ruinlab')}"""

with open("_environment", "w") as f:
    f.write(v)
