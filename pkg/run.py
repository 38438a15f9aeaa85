from flask.cli import FlaskGroup

from app import create_app

app = create_app()
cli = FlaskGroup(create_app=lambda: app, add_default_commands=False)

if __name__ == '__main__':
    cli()
